"""Probability that a subject contributes an observed event.

A subject entering at time r (accrual over [0, R]) is observed until the
study closes at Tf + R, i.e. for Tf + R - r; an independent exponential
loss-to-follow-up process with hazard `censor_hazard` may remove the
subject earlier. The event probability

    E = P(event time <= loss time  and  event time <= Tf + R - r)

is the quantity each arm's sample size is inflated by. For an exponential
event law under uniform accrual E has a closed form; otherwise it reduces
to two single integrals

    E = int_0^Tf f(u) e^(-phi u) du
      + int_Tf^(Tf+R) f(u) e^(-phi u) A(Tf + R - u) du

where f is the event density and A the accrual-time CDF (A(x) = x/R for
uniform entry). Any accrual density on [0, R] may be substituted.

For Weibull shapes below one the density diverges at the origin, so those
integrals are evaluated after the substitution v = u^shape, which maps
the integrand onto a bounded exponential-type one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .models import Exponential, Gompertz, SurvivalModel, Weibull
from .numerics import DEFAULT_SETTINGS, QuadratureSettings, integrate

__all__ = [
    "FollowupWindow",
    "UniformAccrual",
    "TruncatedExponentialAccrual",
    "TabulatedAccrual",
    "UNIFORM_ACCRUAL",
    "prob_event",
    "prob_event_at_accrual_end",
    "prob_event_asymptotic",
]

# survivor mass beyond the truncation point of improper integrals
_TAIL_MASS = 1e-12

_trapezoid = getattr(np, "trapezoid", np.trapz)


@dataclass(frozen=True)
class FollowupWindow:
    """Follow-up duration after accrual closes, and the accrual duration."""

    followup: float
    accrual_duration: float

    def __post_init__(self):
        if not self.followup >= 0:
            raise ValueError("followup must be nonnegative")
        if not self.accrual_duration > 0:
            raise ValueError("accrual_duration must be positive")

    @property
    def total(self) -> float:
        return self.followup + self.accrual_duration


class AccrualPattern:
    """Distribution of entry times on [0, R]."""

    kind = ""

    def check(self, accrual_duration: float) -> None:
        pass

    def density(self, u, accrual_duration):
        raise NotImplementedError

    def cdf(self, u, accrual_duration):
        raise NotImplementedError

    def sample(self, rng, size, accrual_duration):
        raise NotImplementedError


@dataclass(frozen=True)
class UniformAccrual(AccrualPattern):
    """Constant accrual rate over [0, R]."""

    kind = "uniform"

    def density(self, u, accrual_duration):
        return np.where(
            (np.asarray(u) >= 0) & (np.asarray(u) <= accrual_duration),
            1.0 / accrual_duration,
            0.0,
        )

    def cdf(self, u, accrual_duration):
        return np.clip(np.asarray(u, dtype=float) / accrual_duration, 0.0, 1.0)

    def sample(self, rng, size, accrual_duration):
        return rng.random(size) * accrual_duration


@dataclass(frozen=True)
class TruncatedExponentialAccrual(AccrualPattern):
    """Exponential accrual density truncated to [0, R].

    Positive rates front-load enrollment; negative rates make it
    accelerate toward the end of the window. rate == 0 is the uniform
    pattern and is rejected here.
    """

    rate: float

    kind = "truncated_exponential"

    def __post_init__(self):
        if self.rate == 0 or not math.isfinite(self.rate):
            raise ValueError("rate must be nonzero and finite (use UniformAccrual for 0)")

    def density(self, u, accrual_duration):
        u = np.asarray(u, dtype=float)
        norm = -math.expm1(-self.rate * accrual_duration)
        raw = self.rate * np.exp(-self.rate * u) / norm
        return np.where((u >= 0) & (u <= accrual_duration), raw, 0.0)

    def cdf(self, u, accrual_duration):
        u = np.clip(np.asarray(u, dtype=float), 0.0, accrual_duration)
        return np.expm1(-self.rate * u) / math.expm1(-self.rate * accrual_duration)

    def sample(self, rng, size, accrual_duration):
        p = rng.random(size)
        return -np.log1p(p * math.expm1(-self.rate * accrual_duration)) / self.rate


@dataclass(frozen=True)
class TabulatedAccrual(AccrualPattern):
    """Piecewise-linear accrual density given at knots on [0, R].

    The knots must start at 0; the last knot defines the accrual duration
    and must match the window it is used with. The density must be
    nonnegative and integrate to one over the window (checked to 1e-8).
    """

    times: tuple
    values: tuple

    kind = "tabulated"

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("times and values must be 1-d arrays of equal length >= 2")
        if t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must start at 0 and increase strictly")
        if np.any(v < 0):
            raise ValueError("density values must be nonnegative")
        total = _trapezoid(v, t)
        if abs(total - 1.0) > 1e-8:
            raise ValueError(
                f"density must integrate to 1 over [0, {t[-1]}]; got {total!r}"
            )
        object.__setattr__(self, "times", tuple(t))
        object.__setattr__(self, "values", tuple(v))

    @property
    def end(self) -> float:
        return self.times[-1]

    def check(self, accrual_duration: float) -> None:
        if not math.isclose(self.end, accrual_duration, rel_tol=1e-9, abs_tol=0.0):
            raise ValueError(
                f"tabulated accrual ends at {self.end}, window accrues over "
                f"{accrual_duration}"
            )

    def density(self, u, accrual_duration):
        self.check(accrual_duration)
        return np.interp(np.asarray(u, dtype=float), self.times, self.values, left=0.0, right=0.0)

    def _knot_cdf(self):
        t = np.asarray(self.times)
        v = np.asarray(self.values)
        seg = np.diff(t) * 0.5 * (v[1:] + v[:-1])
        return np.concatenate([[0.0], np.cumsum(seg)])

    def cdf(self, u, accrual_duration):
        self.check(accrual_duration)
        u = np.clip(np.asarray(u, dtype=float), 0.0, self.end)
        t = np.asarray(self.times)
        v = np.asarray(self.values)
        knot_cdf = self._knot_cdf()
        idx = np.clip(np.searchsorted(t, u, side="right") - 1, 0, t.size - 2)
        dt = u - t[idx]
        v_at = v[idx] + (v[idx + 1] - v[idx]) * dt / (t[idx + 1] - t[idx])
        return np.clip(knot_cdf[idx] + 0.5 * (v[idx] + v_at) * dt, 0.0, 1.0)

    def sample(self, rng, size, accrual_duration):
        self.check(accrual_duration)
        grid = np.linspace(0.0, self.end, 4097)
        cdf_grid = self.cdf(grid, accrual_duration)
        p = rng.random(size)
        return np.interp(p, cdf_grid, grid)


UNIFORM_ACCRUAL = UniformAccrual()


def _censored_density(model: SurvivalModel, censor_hazard: float):
    """f(u) * exp(-phi u) as a scalar callable, shape-singularity safe."""
    if isinstance(model, Weibull) and model.shape < 1:
        raise AssertionError("use the substituted form for shape < 1")
    if censor_hazard == 0.0:
        return lambda u: float(model.density(u))
    return lambda u: float(model.density(u)) * math.exp(-censor_hazard * u)


def _weibull_substituted(model: Weibull, censor_hazard: float):
    """Integrand after v = u^shape: scale * e^(-scale v) * e^(-phi v^(1/shape))."""
    inv_shape = 1.0 / model.shape
    lam = model.scale
    if censor_hazard == 0.0:
        return lambda v: lam * math.exp(-lam * v)
    return lambda v: lam * math.exp(-lam * v - censor_hazard * v**inv_shape)


def _event_integrals(model, censor_hazard, window, accrual, settings):
    """The two pieces of the generic event-probability reduction."""
    tf = window.followup
    total = window.total
    r = window.accrual_duration

    use_sub = isinstance(model, Weibull) and model.shape != 1.0
    if use_sub:
        g = _weibull_substituted(model, censor_hazard)
        k = model.shape

        def to_v(u):
            return u**k

        def to_u(v):
            return v ** (1.0 / k)

        piece1 = (
            integrate(g, 0.0, to_v(tf), settings).value if tf > 0 else 0.0
        )

        def weighted(v):
            return g(v) * float(accrual.cdf(total - to_u(v), r))

        piece2 = integrate(weighted, to_v(tf), to_v(total), settings).value
    else:
        h = _censored_density(model, censor_hazard)
        piece1 = integrate(h, 0.0, tf, settings).value if tf > 0 else 0.0

        def weighted(u):
            return h(u) * float(accrual.cdf(total - u, r))

        piece2 = integrate(weighted, tf, total, settings).value
    return piece1, piece2


def _exponential_closed_form(rate, censor_hazard, window):
    """Uniform-accrual exponential event probability, in closed form."""
    tf = window.followup
    r = window.accrual_duration
    lam_phi = rate + censor_hazard
    bracket = 1.0 - (
        math.exp(-tf * lam_phi) - math.exp(-(tf + r) * lam_phi)
    ) / (r * lam_phi)
    return rate / lam_phi * bracket


def prob_event(
    model: SurvivalModel,
    censor_hazard: float,
    window: FollowupWindow,
    accrual: AccrualPattern = UNIFORM_ACCRUAL,
    *,
    method: str = "auto",
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Probability of an observed event before study end.

    `method` is "auto" (closed form where available, otherwise
    quadrature), "closed-form" (exponential + uniform accrual only) or
    "quadrature" (force the generic path; used to cross-check the closed
    form).
    """
    if not censor_hazard >= 0:
        raise ValueError("censor_hazard must be nonnegative")
    if method not in ("auto", "closed-form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    accrual.check(window.accrual_duration)

    closed_ok = isinstance(model, Exponential) and isinstance(accrual, UniformAccrual)
    if method == "closed-form" and not closed_ok:
        raise ValueError("closed form exists only for exponential + uniform accrual")
    if closed_ok and method != "quadrature":
        return _exponential_closed_form(model.rate, censor_hazard, window)

    piece1, piece2 = _event_integrals(model, censor_hazard, window, accrual, settings)
    return piece1 + piece2


def prob_event_at_accrual_end(
    model: SurvivalModel,
    censor_hazard: float,
    accrual_duration: float,
    accrual: AccrualPattern = UNIFORM_ACCRUAL,
    *,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Event probability if the study stopped the moment accrual ends.

    Equals prob_event with zero follow-up; it is the upper feasibility
    bound used by the duration solver, hence the separate entry point.
    """
    window = FollowupWindow(0.0, accrual_duration)
    return prob_event(model, censor_hazard, window, accrual, settings=settings)


def prob_event_asymptotic(
    model: SurvivalModel,
    censor_hazard: float,
    *,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Limit of the event probability as the follow-up grows without bound.

    With no random censoring every subject eventually yields an event, so
    the limit is one; otherwise it is the chance the event beats the
    exponential loss process, int f(u) e^(-phi u) du over [0, inf),
    truncated where the survivor mass drops below 1e-12.
    """
    if not censor_hazard >= 0:
        raise ValueError("censor_hazard must be nonnegative")
    if censor_hazard == 0.0:
        return 1.0
    if isinstance(model, Exponential):
        return model.rate / (model.rate + censor_hazard)
    upper = model.quantile(1.0 - _TAIL_MASS)
    if isinstance(model, Weibull) and model.shape != 1.0:
        g = _weibull_substituted(model, censor_hazard)
        return integrate(g, 0.0, upper**model.shape, settings).value
    h = _censored_density(model, censor_hazard)
    return integrate(h, 0.0, upper, settings).value
