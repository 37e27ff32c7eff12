"""Adaptive quadrature and safeguarded bracketed root finding.

The integrator is a globally adaptive Gauss-Kronrod scheme: each interval
is evaluated with the 7-point Gauss rule and its 15-point Kronrod
extension, the difference between the two serving as a (conservative)
error estimate for the Kronrod value. Intervals are bisected worst-first
until the summed error meets the requested tolerance. All nodes are
interior, so integrands with an integrable singularity at an endpoint are
never evaluated there.

The root finder is Brent's method: bisection safeguarding with secant /
inverse quadratic interpolation steps. It needs no derivatives, which
matters here because the objective functions it is pointed at are
themselves built from quadrature.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "QuadratureSettings",
    "IntegralResult",
    "QuadratureError",
    "RootProblem",
    "BracketError",
    "RootConvergenceError",
    "integrate",
    "find_root",
    "DEFAULT_SETTINGS",
]

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
# Positive abscissae only; the rule is symmetric about zero. Odd indices
# (plus the midpoint) are the embedded Gauss nodes. The Kronrod value is
# exact on polynomials through degree 22, the Gauss value through 13.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
)
_WGK_CENTER = 0.209482141084728
_WG = {1: 0.129484966168870, 3: 0.279705391489277, 5: 0.381830050505119}
_WG_CENTER = 0.417959183673469


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and work limit for the adaptive integrator."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 500

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    subdivisions: int


class QuadratureError(RuntimeError):
    """Raised when the integrator cannot meet its tolerance.

    Carries the best estimate reached so the caller can inspect or log it.
    """

    def __init__(self, message: str, best_estimate: float, error_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


def _gauss_kronrod(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One G7/K15 pass over [a, b] -> (kronrod value, error estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    resk = _WGK_CENTER * fc
    resg = _WG_CENTER * fc
    for j, x in enumerate(_XGK):
        f1 = f(c - h * x)
        f2 = f(c + h * x)
        pair = f1 + f2
        resk += _WGK[j] * pair
        if j in _WG:
            resg += _WG[j] * pair
    resk *= h
    resg *= h
    if not math.isfinite(resk):
        raise QuadratureError(
            f"integrand produced a non-finite value on [{a!r}, {b!r}]",
            best_estimate=resk,
            error_estimate=math.inf,
        )
    return resk, abs(resk - resg)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> IntegralResult:
    """Integrate f over [a, b] to the tolerances in `settings`.

    Returns the Kronrod estimate with an error estimate no larger than
    max(abs_tol, rel_tol * |value|) on success. Raises QuadratureError
    (carrying the best estimate) if the budget of subdivisions is spent
    before the tolerance is met.
    """
    if a > b:
        raise ValueError("integration requires a <= b")
    if a == b:
        return IntegralResult(0.0, 0.0, 0)

    val, err = _gauss_kronrod(f, a, b)
    # heap of (-error, tiebreak, a, b, value, error): worst interval first
    counter = 0
    heap = [(-err, counter, a, b, val, err)]
    total_val, total_err = val, err
    splits = 0
    while True:
        tol = max(settings.abs_tol, settings.rel_tol * abs(total_val))
        if total_err <= tol:
            return IntegralResult(total_val, total_err, splits)
        if splits >= settings.max_subdivisions:
            raise QuadratureError(
                f"quadrature did not converge after {splits} subdivisions "
                f"(error estimate {total_err:.3e}, tolerance {tol:.3e})",
                best_estimate=total_val,
                error_estimate=total_err,
            )
        _, _, ia, ib, ival, ierr = heapq.heappop(heap)
        mid = 0.5 * (ia + ib)
        lval, lerr = _gauss_kronrod(f, ia, mid)
        rval, rerr = _gauss_kronrod(f, mid, ib)
        total_val += lval + rval - ival
        total_err += lerr + rerr - ierr
        counter += 1
        heapq.heappush(heap, (-lerr, counter, ia, mid, lval, lerr))
        counter += 1
        heapq.heappush(heap, (-rerr, counter, mid, ib, rval, rerr))
        splits += 1


class BracketError(ValueError):
    """The objective does not change sign over the supplied bracket."""


class RootConvergenceError(RuntimeError):
    """Iteration budget exhausted; carries the last iterate."""

    def __init__(self, message: str, last_iterate: float):
        super().__init__(message)
        self.last_iterate = last_iterate


@dataclass(frozen=True)
class RootProblem:
    """A bracketed scalar root-finding problem.

    The objective must change sign over [bracket_lo, bracket_hi]; `tol` is
    an absolute tolerance on the abscissa.
    """

    objective: Callable[[float], float]
    bracket_lo: float
    bracket_hi: float
    tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not self.bracket_lo < self.bracket_hi:
            raise ValueError("bracket_lo must be strictly below bracket_hi")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def find_root(problem: RootProblem) -> float:
    """Locate a zero of the objective inside the bracket (Brent's method)."""
    f = problem.objective
    a, b = problem.bracket_lo, problem.bracket_hi
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError(
            f"no sign change over [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}"
        )

    c, fc = a, fa
    d = e = b - a
    eps = math.ulp(1.0)
    for _ in range(problem.max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * eps * abs(b) + 0.5 * problem.tol
        m = 0.5 * (c - b)
        if abs(m) <= tol1 or fb == 0.0:
            return b
        if abs(e) < tol1 or abs(fa) <= abs(fb):
            d = e = m  # bisection fallback
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            s, e = e, d
            if 2.0 * p < 3.0 * m * q - abs(tol1 * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                d = e = m
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if m > 0 else -tol1
        fb = f(b)
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
    raise RootConvergenceError(
        f"root finder exhausted {problem.max_iter} iterations", last_iterate=b
    )
