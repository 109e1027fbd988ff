"""Experiment maps: structured base maps plus reproducible bounded noise.

The noise is a pure function of (seed, point): coordinates come from keyed
blake2b over a canonical encoding of the point, are symmetrized to the
requested parity, and are then scaled per point so the codomain gauge of the
noise never exceeds the amplitude delta. No RNG state is involved, so
evaluation order cannot change results and two processes agree bit for bit.

Scaling preserves parity exactly: the raw noise at x and -x have coordinate-
wise equal magnitudes by construction, hence identical gauge values, hence
identical scale factors.

Float mode uses the little-endian float64 byte image of the point (with -0.0
normalized to +0.0); exact mode encodes numerator/denominator pairs and
quantizes noise coordinates to the dyadic grid with denominator 2^16.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, InputError, RangeError
from .gauges import Gauge
from . import vectors as vec

BASES = ("linear", "quadratic-form", "zero")
PARITIES = ("none", "odd", "even")
BACKENDS = ("float64", "exact-rational")

# Dyadic grid for exact-mode noise coordinates.
NOISE_DENOMINATOR = 2 ** 16

# Noise is scaled to amplitude * (1 - 2^-20) rather than to the amplitude
# itself. The premise inequalities downstream are tight: sign-aligned noise
# at gauge exactly delta makes the premise an equality, and float rounding
# would then flip the comparison at random. The headroom keeps every bound
# strict by a margin (~1e-6 relative) that dwarfs float error yet is
# invisible at experiment scale. gauge(noise) <= amplitude still holds.
NOISE_HEADROOM = Fraction(2 ** 20 - 1, 2 ** 20)


@dataclass(frozen=True)
class MapSpec:
    base: str
    matrix: tuple | None
    noise_amplitude: object  # float, or Fraction in exact mode
    noise_parity: str
    seed: int
    backend: str = "float64"
    codomain_dim: int | None = None

    def __post_init__(self):
        if self.base not in BASES:
            raise ConfigurationError(f"map.base must be one of {BASES}, got {self.base!r}")
        if self.noise_parity not in PARITIES:
            raise ConfigurationError(
                f"map.noise_parity must be one of {PARITIES}, got {self.noise_parity!r}"
            )
        if self.backend not in BACKENDS:
            raise ConfigurationError(f"map.backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.noise_amplitude < 0:
            raise ConfigurationError(f"map.noise_amplitude must be >= 0, got {self.noise_amplitude!r}")
        if self.base in ("linear", "quadratic-form"):
            if self.matrix is None:
                raise ConfigurationError(f"map.base {self.base!r} needs a matrix")
        elif self.codomain_dim is None:
            raise ConfigurationError("map.base 'zero' needs codomain_dim")

    @staticmethod
    def from_config(cfg: dict) -> "MapSpec":
        if not isinstance(cfg, dict):
            raise ConfigurationError("map config must be an object")
        known = {"base", "matrix", "noise_amplitude", "noise_parity", "seed", "backend", "codomain_dim"}
        extra = set(cfg) - known
        if extra:
            raise ConfigurationError(f"map config has unknown fields {sorted(extra)}")
        backend = cfg.get("backend", "float64")
        amplitude = cfg.get("noise_amplitude", 0)
        if backend == "exact-rational":
            amplitude = _parse_exact_scalar(amplitude, "map.noise_amplitude")
        else:
            amplitude = float(amplitude)
        matrix = cfg.get("matrix")
        if matrix is not None:
            matrix = tuple(tuple(row) for row in matrix)
        return MapSpec(
            base=cfg.get("base", "zero"),
            matrix=matrix,
            noise_amplitude=amplitude,
            noise_parity=cfg.get("noise_parity", "none"),
            seed=int(cfg.get("seed", 0)),
            backend=backend,
            codomain_dim=cfg.get("codomain_dim"),
        )


def _parse_exact_scalar(value, field: str) -> Fraction:
    """Exact scalar from config: int, 'p/q' string, or decimal string/float."""
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            # Decimal reading of the literal, so 0.001 means 1/1000, not the
            # binary float closest to it.
            return Fraction(repr(value))
        if isinstance(value, Fraction):
            return value
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"{field}: cannot parse {value!r} as a rational") from e
    raise ConfigurationError(f"{field}: cannot parse {value!r} as a rational")


@dataclass(frozen=True)
class EvaluableMap:
    """A callable map bundled with the metadata the corrector machinery needs."""

    fn: object
    scalar_backend: str
    growth_hint: str  # linear | quadratic | bounded | unknown
    domain_dim: int
    codomain_dim: int

    def __call__(self, x):
        return self.fn(x)


def encode_point(x) -> bytes:
    """Canonical byte image of a point, the hash input for noise."""
    if isinstance(x, tuple):
        parts = []
        for c in x:
            parts.append(str(c.numerator).encode())
            parts.append(b"/")
            parts.append(str(c.denominator).encode())
            parts.append(b";")
        return b"".join(parts)
    # +0.0 so that -0.0 and 0.0 encode identically
    return struct.pack("<%dd" % len(x), *[float(c) + 0.0 for c in x])


def _digest_words(seed: int, payload: bytes, count: int) -> list[int]:
    """count uint64 words from keyed blake2b, extended by block counter."""
    key = seed.to_bytes(8, "little", signed=False)
    words: list[int] = []
    block = 0
    while len(words) < count:
        h = hashlib.blake2b(payload + block.to_bytes(4, "little"), key=key, digest_size=64)
        d = h.digest()
        for i in range(0, 64, 8):
            words.append(int.from_bytes(d[i : i + 8], "little"))
        block += 1
    return words[:count]


def _raw_noise(seed: int, x, m: int):
    """Unscaled noise coordinates in [-1, 1), same backend as x."""
    words = _digest_words(seed, encode_point(x), m)
    if isinstance(x, tuple):
        out = []
        for w in words:
            u = w % (2 * NOISE_DENOMINATOR)  # uniform over 2^17 values
            out.append(Fraction(u - NOISE_DENOMINATOR, NOISE_DENOMINATOR))
        return tuple(out)
    return np.array([(w >> 11) * 2.0 ** -53 * 2.0 - 1.0 for w in words])


def _symmetrized_noise(seed: int, x, m: int, parity: str):
    raw = _raw_noise(seed, x, m)
    if parity == "none":
        return raw
    raw_neg = _raw_noise(seed, vec.vneg(x), m)
    if parity == "odd":
        return vec.vscale(Fraction(1, 2) if isinstance(x, tuple) else 0.5, vec.vsub(raw, raw_neg))
    return vec.vscale(Fraction(1, 2) if isinstance(x, tuple) else 0.5, vec.vadd(raw, raw_neg))


def scaled_noise(seed: int, x, m: int, parity: str, amplitude, gauge: Gauge):
    """Noise at x with gauge(noise) <= amplitude, exactly zero if amplitude is.

    The actual target is amplitude * NOISE_HEADROOM; see the constant above.
    """
    exact = isinstance(x, tuple)
    if amplitude == 0:
        return vec.vzero(m, exact)
    eta = _symmetrized_noise(seed, x, m, parity)
    g = gauge.evaluate(eta)
    if g == 0:
        return eta
    deg = gauge.homogeneity_degree
    if exact:
        if deg != 1:
            raise ConfigurationError("exact noise scaling needs a 1-homogeneous gauge")
        return vec.vscale(Fraction(amplitude) * NOISE_HEADROOM / g, eta)
    target = float(amplitude) * float(NOISE_HEADROOM)
    t = (target / g) ** (1.0 / deg)
    eta = vec.vscale(t, eta)
    # Float rounding can leave the gauge a few ulp above the target; shave
    # until the bound holds. Both x and -x shave identically because their
    # raw gauges are bit-equal.
    for _ in range(8):
        if gauge.evaluate(eta) <= target:
            return eta
        eta = vec.vscale(1.0 - 2.0 ** -48, eta)
    raise RangeError(f"noise scaling failed to enforce amplitude at x={x!r}")


def _parse_matrix(matrix, exact: bool):
    if exact:
        return tuple(tuple(_parse_exact_scalar(c, "map.matrix") for c in row) for row in matrix)
    return np.array([[float(c) for c in row] for row in matrix], dtype=np.float64)


def build_map(spec: MapSpec, gauge: Gauge) -> EvaluableMap:
    """Assemble base + noise into an evaluable map.

    The gauge argument fixes the codomain gauge in which noise_amplitude is
    measured; it must match the gauge the experiment runs under.
    """
    exact = spec.backend == "exact-rational"
    if exact and not gauge.supports_exact:
        raise ConfigurationError(
            f"exact-rational backend cannot evaluate gauge {gauge.describe()}"
        )
    if spec.base == "linear":
        mat = _parse_matrix(spec.matrix, exact)
        m = len(spec.matrix)
        d = len(spec.matrix[0])
        growth = "linear"

        if exact:
            def base_fn(x, _mat=mat):
                return tuple(
                    sum((row[j] * x[j] for j in range(len(x))), Fraction(0)) for row in _mat
                )
        else:
            def base_fn(x, _mat=mat):
                return _mat @ x
    elif spec.base == "quadratic-form":
        mat = _parse_matrix(spec.matrix, exact)
        d = len(spec.matrix)
        m = 1
        growth = "quadratic"

        if exact:
            def base_fn(x, _mat=mat):
                acc = Fraction(0)
                for i in range(len(x)):
                    for j in range(len(x)):
                        acc += x[i] * _mat[i][j] * x[j]
                return (acc,)
        else:
            def base_fn(x, _mat=mat):
                return np.array([float(x @ (_mat @ x))])
    else:
        m = int(spec.codomain_dim)
        d = None
        growth = "bounded"

        def base_fn(x, _m=m, _exact=exact):
            return vec.vzero(_m, _exact)

    amplitude = spec.noise_amplitude
    seed = spec.seed
    parity = spec.noise_parity

    def fn(x):
        if exact and not isinstance(x, tuple):
            raise InputError("exact-rational map expects tuple-of-Fraction points")
        if not exact and isinstance(x, tuple):
            raise InputError("float64 map expects numpy array points")
        y = base_fn(x)
        if amplitude != 0:
            y = vec.vadd(y, scaled_noise(seed, x, m, parity, amplitude, gauge))
        if not exact and not np.all(np.isfinite(y)):
            raise RangeError(f"map value left float64 range at x={x!r}")
        return y

    return EvaluableMap(
        fn=fn,
        scalar_backend=spec.backend,
        growth_hint=growth,
        domain_dim=d if d is not None else m,
        codomain_dim=m,
    )
