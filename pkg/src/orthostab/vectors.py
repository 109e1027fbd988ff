"""Small vector helpers working across both scalar backends.

Float64 vectors are 1-d numpy arrays; exact-rational vectors are tuples of
fractions.Fraction. Every helper dispatches on the container type so callers
never branch.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

Vector = "np.ndarray | tuple[Fraction, ...]"


def is_exact(v) -> bool:
    return isinstance(v, tuple)


def vadd(u, v):
    if isinstance(u, np.ndarray):
        return u + v
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v):
    if isinstance(u, np.ndarray):
        return u - v
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(u):
    if isinstance(u, np.ndarray):
        return -u
    return tuple(-a for a in u)


def vscale(t, u):
    if isinstance(u, np.ndarray):
        return t * u
    return tuple(t * a for a in u)


def vdot(u, v):
    if isinstance(u, np.ndarray):
        return float(np.dot(u, v))
    s = Fraction(0)
    for a, b in zip(u, v, strict=True):
        s += a * b
    return s


def vzero(dim: int, exact: bool):
    if exact:
        return tuple(Fraction(0) for _ in range(dim))
    return np.zeros(dim)


def is_zero(v) -> bool:
    if isinstance(v, np.ndarray):
        return bool(np.all(v == 0.0))
    return all(a == 0 for a in v)


def vlen(v) -> int:
    return len(v)


def as_float_list(v) -> list[float]:
    """Plain-float coordinates, for JSON and CSV serialization."""
    return [float(a) for a in v]


def from_floats(coords, exact: bool):
    """Build a backend vector from float coordinates (exact mode converts losslessly)."""
    if exact:
        return tuple(Fraction(float(c)) for c in coords)
    return np.asarray([float(c) for c in coords], dtype=np.float64)
