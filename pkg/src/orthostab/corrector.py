"""Corrector sequence machinery.

For a map f the n-th corrector term at x is

    corrector_term(f, x, n) = c_plus(n) * f(2^n x) - c_minus(n) * f(-2^n x)

with c_plus(n) = (2^n + 1) / 2^(2n+1) and c_minus(n) = (2^n - 1) / 2^(2n+1).
The sequence is stationary on maps that are additive and odd (where it equals
f itself) and on maps that are quadratic and even, and it contracts toward a
nearby such map whenever the three-eighths defect

    three_eighths_defect(f, x) = gauge(f(2x) - 3/8 f(4x) + 1/8 f(-4x))

is uniformly small: consecutive terms differ by at most that defect bound
times

    cauchy_gap(n, beta) = c_plus(n)^beta + c_minus(n)^beta

under a beta-homogeneous gauge. Summing the gaps gives the certified series
enclosure gap_series(beta), whose tail bounds the distance from the n-th term
to the limit. Everything here works on both scalar backends; beta must be 1
for exact-rational work since other powers leave the rationals.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, InputError, PrecisionWarning, RangeError
from .gauges import Gauge
from .maps import EvaluableMap
from . import vectors as vec

EPS = sys.float_info.epsilon

# Multiplier on machine epsilon for first-order rounding envelopes; generous
# for the handful of flops behind each combined evaluation.
OPS_ENVELOPE = 64

# Above this n, float64 corrector terms of quadratically growing maps lose
# roughly n bits to cancellation (coefficients ~2^-n against values ~4^n).
N_CANCEL_DEFAULT = 20


def coefficients(n: int, exact: bool = False):
    """(c_plus(n), c_minus(n)); both exact dyadics in either backend for n <= 52."""
    if n < 1:
        raise InputError(f"corrector index must be >= 1, got {n}")
    if exact:
        den = 2 ** (2 * n + 1)
        return Fraction(2 ** n + 1, den), Fraction(2 ** n - 1, den)
    den = 2.0 ** (2 * n + 1)
    return (2.0 ** n + 1.0) / den, (2.0 ** n - 1.0) / den


def _three_eighths(exact: bool):
    if exact:
        return Fraction(3, 8), Fraction(1, 8)
    return 0.375, 0.125


def _scale_point(x, k: int):
    """2^k * x, exact in both backends."""
    if isinstance(x, tuple):
        return vec.vscale(Fraction(2 ** k), x)
    return (2.0 ** k) * x


def three_eighths_defect(f, x, gauge: Gauge):
    """gauge(f(2x) - 3/8 f(4x) + 1/8 f(-4x)), the contraction hypothesis at x."""
    a, b = _three_eighths(isinstance(x, tuple))
    x2, x4 = _scale_point(x, 1), _scale_point(x, 2)
    expr = vec.vadd(
        vec.vsub(f(x2), vec.vscale(a, f(x4))),
        vec.vscale(b, f(vec.vneg(x4))),
    )
    return gauge.evaluate(expr)


def corrector_term(f, x, n: int, n_cancel: int = N_CANCEL_DEFAULT, warn: bool = True):
    """c_plus(n) f(2^n x) - c_minus(n) f(-2^n x).

    Emits PrecisionWarning when a float64 quadratically growing map is pushed
    past n_cancel, where cancellation costs about n bits.
    """
    exact = isinstance(x, tuple)
    cp, cm = coefficients(n, exact)
    if (
        warn
        and not exact
        and getattr(f, "growth_hint", "unknown") == "quadratic"
        and n > n_cancel
    ):
        import warnings

        warnings.warn(
            f"corrector term n={n} beyond cancellation budget {n_cancel} for a "
            "quadratically growing float64 map",
            PrecisionWarning,
            stacklevel=2,
        )
    xn = _scale_point(x, n)
    return vec.vsub(vec.vscale(cp, f(xn)), vec.vscale(cm, f(vec.vneg(xn))))


def corrector_residual(f, x, n: int, gauge: Gauge):
    """gauge(f(2x) - g_n(2x)) where g_n is the n-th corrector term.

    Expanded, this is gauge(f(2x) - c_plus(n) f(2^(n+1) x) + c_minus(n) f(-2^(n+1) x));
    at n = 1 it coincides with the three-eighths defect at x.
    """
    exact = isinstance(x, tuple)
    cp, cm = coefficients(n, exact)
    xs = _scale_point(x, n + 1)
    expr = vec.vadd(
        vec.vsub(f(_scale_point(x, 1)), vec.vscale(cp, f(xs))),
        vec.vscale(cm, f(vec.vneg(xs))),
    )
    return gauge.evaluate(expr)


def cauchy_gap(n: int, beta, exact: bool = False):
    """Gap coefficient c_plus(n)^beta + c_minus(n)^beta; equals 2^-n at beta = 1."""
    if exact:
        if beta != 1:
            raise ConfigurationError("exact cauchy_gap needs beta = 1")
        return Fraction(1, 2 ** n)
    cp, cm = coefficients(n, exact=False)
    b = float(beta)
    return cp ** b + cm ** b


@dataclass(frozen=True)
class SeriesEnclosure:
    """Certified interval [lower, upper] containing the series value."""

    lower: object
    upper: object
    terms: int

    @property
    def width(self):
        return self.upper - self.lower

    @property
    def midpoint(self):
        return (self.upper + self.lower) / 2


def gap_tail_bound(n_start: int, beta, exact: bool = False):
    """Upper bound for sum of cauchy_gap(m, beta) over m >= n_start.

    Elementary majorant from c_plus(m), c_minus(m) <= 2^-m:
    tail <= 2 * 2^(-n_start*beta) / (1 - 2^-beta). At beta = 1 the majorant is
    tight termwise and the tail is exactly 2^(1 - n_start).
    """
    if n_start < 1:
        raise InputError(f"tail start must be >= 1, got {n_start}")
    if exact:
        if beta != 1:
            raise ConfigurationError("exact tail bound needs beta = 1")
        return Fraction(2, 2 ** n_start)
    b = float(beta)
    if b <= 0:
        raise ConfigurationError(f"beta must be positive, got {beta!r}")
    if b == 1.0:
        return 2.0 ** (1 - n_start)
    r = 2.0 ** -b
    return 2.0 * (2.0 ** (-n_start * b)) / (1.0 - r)


def gap_series(beta, tol: float = 1e-12, exact: bool = False) -> SeriesEnclosure:
    """Certified enclosure of sum of cauchy_gap(n, beta) over n >= 1.

    Terms are summed until the geometric tail majorant drops below tol/2;
    the upper end carries the tail plus a summation rounding pad. The exact
    backend (beta = 1) returns [1 - 2^-N, 1] since the majorant is tight there.
    """
    if tol <= 0:
        raise ConfigurationError(f"tolerance must be positive, got {tol!r}")
    if exact:
        if beta != 1:
            raise ConfigurationError("exact gap_series needs beta = 1")
        n_terms = max(1, math.ceil(-math.log2(min(tol, 1.0))))
        partial = 1 - Fraction(1, 2 ** n_terms)
        return SeriesEnclosure(partial, Fraction(1), n_terms)
    b = float(beta)
    if b <= 0:
        raise ConfigurationError(f"beta must be positive, got {beta!r}")
    terms = []
    n = 1
    while gap_tail_bound(n, b) > tol / 2:
        terms.append(cauchy_gap(n, b))
        n += 1
        if n > 200_000:
            raise ConfigurationError(f"tolerance {tol!r} unreachable in float64 at beta={beta!r}")
    partial = math.fsum(terms)
    tail = gap_tail_bound(n, b)
    pad = 16 * EPS * max(1.0, partial)
    if tail + pad > tol:
        raise ConfigurationError(f"tolerance {tol!r} unreachable in float64 at beta={beta!r}")
    return SeriesEnclosure(partial, partial + tail + pad, n - 1)


def scale_table(f, x, k_max: int):
    """(fp, fm) with fp[k] = f(2^k x) and fm[k] = f(-2^k x), k = 0..k_max."""
    fp, fm = [], []
    for k in range(k_max + 1):
        xk = _scale_point(x, k)
        yp, ym = f(xk), f(vec.vneg(xk))
        if not isinstance(x, tuple):
            if not (np.all(np.isfinite(yp)) and np.all(np.isfinite(ym))):
                raise RangeError(f"map value left float64 range at scale 2^{k} of x={x!r}")
        fp.append(yp)
        fm.append(ym)
    return fp, fm


def _defects_from_table(fp, fm, k: int, gauge: Gauge, exact: bool):
    """Three-eighths defects at +/-2^(k-1)x with their rounding envelopes.

    Returns ((defect_plus, slack_plus), (defect_minus, slack_minus)). The
    slack is a first-order rounding envelope, OPS_ENVELOPE * eps * the
    coordinate-wise magnitude sum pushed through the gauge; it is what the
    computed defect can deviate from the true one by. Zero on the exact
    backend. At scales where the base map values dwarf the defect the
    envelope exceeds the defect itself, and a comparison against a bound is
    only decidable outside the envelope.
    """
    a, b = _three_eighths(exact)
    plus = vec.vadd(vec.vsub(fp[k], vec.vscale(a, fp[k + 1])), vec.vscale(b, fm[k + 1]))
    minus = vec.vadd(vec.vsub(fm[k], vec.vscale(a, fm[k + 1])), vec.vscale(b, fp[k + 1]))
    if exact:
        zero = Fraction(0)
        return (gauge.evaluate(plus), zero), (gauge.evaluate(minus), zero)
    mag_p = np.abs(fp[k]) + a * np.abs(fp[k + 1]) + b * np.abs(fm[k + 1])
    mag_m = np.abs(fm[k]) + a * np.abs(fm[k + 1]) + b * np.abs(fp[k + 1])
    return (
        (gauge.evaluate(plus), gauge.evaluate(OPS_ENVELOPE * EPS * mag_p)),
        (gauge.evaluate(minus), gauge.evaluate(OPS_ENVELOPE * EPS * mag_m)),
    )


@dataclass
class CorrectorTrace:
    """Per-point record of a corrector run: terms, defects, guards, residual."""

    point: object
    n_max: int
    defect_bound: object
    residual_bound: object
    rows: list = field(default_factory=list)  # (n, g_n vector, defect at +2^(n-1)x)
    hypothesis_ok: bool = True
    hypothesis_violations: list = field(default_factory=list)  # (k, sign, defect value)
    # Scales where the bound comparison fell inside the rounding envelope:
    # (k, sign, defect, slack). Not violations; undecidable at this precision.
    indeterminate_scales: list = field(default_factory=list)
    precision_warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        from .reporting import jsonable

        return {
            "point": jsonable(self.point),
            "n_max": self.n_max,
            "defect_bound": jsonable(self.defect_bound),
            "residual_bound": jsonable(self.residual_bound),
            "hypothesis_ok": self.hypothesis_ok,
            "hypothesis_violations": jsonable(self.hypothesis_violations),
            "indeterminate_scales": jsonable(self.indeterminate_scales),
            "precision_warnings": list(self.precision_warnings),
            "rows": [
                {"n": n, "term": jsonable(g), "defect": jsonable(d)} for n, g, d in self.rows
            ],
        }


def corrector_limit(
    f,
    x,
    beta,
    defect_bound,
    gauge: Gauge,
    n_max: int,
    n_cancel: int = N_CANCEL_DEFAULT,
):
    """Run the corrector to index n_max and certify the truncation debt.

    Returns (g, trace) where g is the n_max-th corrector term. The residual
    bound defect_bound * gap_tail_bound(n_max, beta) bounds the distance from
    g to the limit map, provided the three-eighths defect stays within
    defect_bound at every scale, not only the finitely many checked here. The
    trace records the defects at the scales actually touched (both signs) and
    flags violations instead of assuming them away. Each float comparison
    carries the rounding envelope from _defects_from_table: a defect above
    bound + slack is a certain violation; one inside (bound, bound + slack]
    is recorded as indeterminate, since at large scales the cancellation
    residue of the base map exceeds anything the comparison could detect.
    The exact backend has slack 0 and decides every scale.
    """
    if n_max < 1:
        raise InputError(f"n_max must be >= 1, got {n_max}")
    exact = isinstance(x, tuple)
    fp, fm = scale_table(f, x, n_max + 1)
    trace = CorrectorTrace(
        point=x,
        n_max=n_max,
        defect_bound=defect_bound,
        residual_bound=defect_bound * gap_tail_bound(n_max, beta, exact),
    )
    if (
        not exact
        and getattr(f, "growth_hint", "unknown") == "quadratic"
        and n_max > n_cancel
    ):
        trace.precision_warnings.append(
            f"n_max={n_max} beyond cancellation budget {n_cancel} for a quadratically "
            "growing float64 map; trailing digits are rounding-dominated"
        )
    defects_plus = {}
    for k in range(1, n_max + 1):
        (dp, sp), (dm, sm) = _defects_from_table(fp, fm, k, gauge, exact)
        defects_plus[k] = dp
        for sign, d, s in (("+", dp, sp), ("-", dm, sm)):
            if d > defect_bound + s:
                trace.hypothesis_ok = False
                trace.hypothesis_violations.append((k, sign, d))
            elif d > defect_bound:
                trace.indeterminate_scales.append((k, sign, d, s))
    g = None
    for n in range(1, n_max + 1):
        cp, cm = coefficients(n, exact)
        g = vec.vsub(vec.vscale(cp, fp[n]), vec.vscale(cm, fm[n]))
        trace.rows.append((n, g, defects_plus[n]))
    return g, trace


class CorrectorEvaluator:
    """Fixed-n corrector as a map, with term magnitudes for rounding envelopes."""

    def __init__(self, f, n: int):
        if n < 1:
            raise InputError(f"corrector index must be >= 1, got {n}")
        self.f = f
        self.n = n

    def value(self, z):
        cp, cm = coefficients(self.n, isinstance(z, tuple))
        zn = _scale_point(z, self.n)
        return vec.vsub(vec.vscale(cp, self.f(zn)), vec.vscale(cm, self.f(vec.vneg(zn))))

    def value_and_magnitude(self, z):
        """(corrector value, coordinate-wise sum of |term| magnitudes)."""
        exact = isinstance(z, tuple)
        cp, cm = coefficients(self.n, exact)
        zn = _scale_point(z, self.n)
        tp = vec.vscale(cp, self.f(zn))
        tm = vec.vscale(cm, self.f(vec.vneg(zn)))
        if exact:
            mag = tuple(abs(a) + abs(b) for a, b in zip(tp, tm, strict=True))
        else:
            mag = np.abs(tp) + np.abs(tm)
        return vec.vsub(tp, tm), mag

    def __call__(self, z):
        return self.value(z)


@dataclass
class GapBoundRow:
    n: int
    residual: object          # corrector_residual at this n
    residual_next: object
    residual_step: object     # |residual(n+1) - residual(n)|
    term_gap: object          # gauge(g_n - g_(n+1))
    gap_bound: object         # defect_bound * cauchy_gap(n, beta)
    level_bound: object       # defect_bound * (series upper + 1)
    step_ok: bool = True
    term_ok: bool = True
    level_ok: bool = True


@dataclass
class GapBoundReport:
    point: object
    defect_bound: object
    hypothesis_ok: bool
    hypothesis_violations: list
    hypothesis_indeterminate: list
    rows: list

    @property
    def all_ok(self) -> bool:
        return all(r.step_ok and r.term_ok and r.level_ok for r in self.rows)


def check_gap_bounds(f, x, n_values, defect_bound, beta, gauge: Gauge) -> GapBoundReport:
    """Check the telescoping inequalities behind the corrector convergence.

    For each n in n_values: the residual step |r(n+1) - r(n)| and the term gap
    gauge(g_n - g_(n+1)) must both stay within defect_bound * cauchy_gap(n),
    and the residual level within defect_bound * (gap_series upper + 1). The
    comparisons are exact in the rational backend. The hypothesis (defects at
    the touched scales within defect_bound) is recorded, not assumed.
    """
    if not n_values:
        raise InputError("n_values must be nonempty")
    n_top = max(n_values)
    exact = isinstance(x, tuple)
    fp, fm = scale_table(f, x, n_top + 2)
    violations = []
    indeterminate = []
    for k in range(1, n_top + 2):
        (dp, sp), (dm, sm) = _defects_from_table(fp, fm, k, gauge, exact)
        for sign, d, s in (("+", dp, sp), ("-", dm, sm)):
            if d > defect_bound + s:
                violations.append((k, sign, d))
            elif d > defect_bound:
                indeterminate.append((k, sign, d, s))
    series_upper = gap_series(beta, exact=exact).upper
    level_cap = defect_bound * (series_upper + 1)

    def residual_at(n):
        cp, cm = coefficients(n, exact)
        expr = vec.vadd(
            vec.vsub(fp[1], vec.vscale(cp, fp[n + 1])), vec.vscale(cm, fm[n + 1])
        )
        return gauge.evaluate(expr)

    rows = []
    for n in sorted(n_values):
        cp, cm = coefficients(n, exact)
        cp1, cm1 = coefficients(n + 1, exact)
        g_n = vec.vsub(vec.vscale(cp, fp[n]), vec.vscale(cm, fm[n]))
        g_n1 = vec.vsub(vec.vscale(cp1, fp[n + 1]), vec.vscale(cm1, fm[n + 1]))
        r_n = residual_at(n)
        r_n1 = residual_at(n + 1)
        step = abs(r_n1 - r_n)
        term_gap = gauge.evaluate(vec.vsub(g_n, g_n1))
        bound = defect_bound * cauchy_gap(n, beta, exact)
        rows.append(
            GapBoundRow(
                n=n,
                residual=r_n,
                residual_next=r_n1,
                residual_step=step,
                term_gap=term_gap,
                gap_bound=bound,
                level_bound=level_cap,
                step_ok=step <= bound,
                term_ok=term_gap <= bound,
                level_ok=r_n <= level_cap,
            )
        )
    return GapBoundReport(
        point=x,
        defect_bound=defect_bound,
        hypothesis_ok=not violations,
        hypothesis_violations=violations,
        hypothesis_indeterminate=indeterminate,
        rows=rows,
    )
