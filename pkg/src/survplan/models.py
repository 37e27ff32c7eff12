"""Parametric survival laws: exponential, Weibull and Gompertz.

Each family exposes hazard, survivor, density and quantile functions plus
inverse-transform sampling, with the parameterizations

    exponential   h(t) = rate,            S(t) = exp(-rate * t)
    Weibull       h(t) = shape * scale * t^(shape-1),
                  S(t) = exp(-scale * t^shape)
    Gompertz      h(t) = scale * exp(shape * t),
                  S(t) = exp(-scale * (exp(shape * t) - 1) / shape)

The scale parameter multiplies the hazard in every family, so two models
of the same family with the same shape have a hazard ratio that is
constant in time and equal to their scale ratio. `ModelPair` enforces
exactly that, which is what keeps the proportional-hazards assumption
valid across a control/experimental pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "Exponential",
    "Weibull",
    "Gompertz",
    "ModelPair",
    "rate_from_median",
    "SurvivalModel",
]


def _out(x):
    # scalar in, float out; arrays pass through
    return float(x) if np.ndim(x) == 0 else x


def _check_time(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("time must be nonnegative")
    return arr


def _check_prob(p):
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise ValueError("probability must lie strictly inside (0, 1)")
    return arr


class SurvivalModel:
    """Behaviour shared by the three parametric families."""

    family = ""

    def density(self, t):
        """Event-time density, hazard(t) * survival(t)."""
        return self.hazard(t) * self.survival(t)

    def sample_event_time(self, u):
        """Inverse-transform draw: u uniform in (0, 1) -> event time.

        A shared uniform stream therefore yields coupled draws across
        families, which makes cross-family comparisons less noisy.
        """
        return self.quantile(u)

    def median(self):
        return self.quantile(0.5)


@dataclass(frozen=True)
class Exponential(SurvivalModel):
    rate: float

    family = "exponential"

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")

    @property
    def scale(self) -> float:
        return self.rate

    @property
    def shape(self):
        return None

    def with_scale(self, scale: float) -> "Exponential":
        return Exponential(rate=scale)

    def hazard(self, t):
        t = _check_time(t)
        return _out(np.full_like(t, self.rate))

    def cumulative_hazard(self, t):
        t = _check_time(t)
        return _out(self.rate * t)

    def survival(self, t):
        t = _check_time(t)
        return _out(np.exp(-self.rate * t))

    def quantile(self, p):
        p = _check_prob(p)
        return _out(-np.log1p(-p) / self.rate)


@dataclass(frozen=True)
class Weibull(SurvivalModel):
    scale: float
    shape: float

    family = "weibull"

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if not self.shape > 0:
            raise ValueError("shape must be positive")

    def with_scale(self, scale: float) -> "Weibull":
        return replace(self, scale=scale)

    def hazard(self, t):
        t = _check_time(t)
        if self.shape < 1 and np.any(t == 0):
            raise ValueError(
                "Weibull hazard diverges at t=0 for shape < 1; evaluate at t > 0"
            )
        return _out(self.shape * self.scale * t ** (self.shape - 1.0))

    def cumulative_hazard(self, t):
        t = _check_time(t)
        return _out(self.scale * t**self.shape)

    def survival(self, t):
        t = _check_time(t)
        return _out(np.exp(-self.scale * t**self.shape))

    def quantile(self, p):
        p = _check_prob(p)
        return _out((-np.log1p(-p) / self.scale) ** (1.0 / self.shape))


@dataclass(frozen=True)
class Gompertz(SurvivalModel):
    scale: float
    shape: float

    family = "gompertz"

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if not self.shape > 0:
            raise ValueError("shape must be positive")

    def with_scale(self, scale: float) -> "Gompertz":
        return replace(self, scale=scale)

    def hazard(self, t):
        t = _check_time(t)
        return _out(self.scale * np.exp(self.shape * t))

    def cumulative_hazard(self, t):
        # expm1 keeps the shape -> 0 limit (exponential with this scale)
        # accurate to machine precision without a series switch.
        t = _check_time(t)
        return _out(self.scale * np.expm1(self.shape * t) / self.shape)

    def survival(self, t):
        t = _check_time(t)
        return _out(np.exp(-self.scale * np.expm1(self.shape * t) / self.shape))

    def quantile(self, p):
        p = _check_prob(p)
        return _out(np.log1p(-self.shape * np.log1p(-p) / self.scale) / self.shape)


@dataclass(frozen=True)
class ModelPair:
    """Control/experimental models with a constant hazard ratio.

    Both members must belong to the same family and share the shape
    parameter; the hazard ratio then equals the scale ratio at every t.
    """

    control: SurvivalModel
    experimental: SurvivalModel

    def __post_init__(self):
        if self.control.family != self.experimental.family:
            raise ValueError("control and experimental must be the same family")
        if self.control.shape != self.experimental.shape:
            raise ValueError(
                "shape must be shared across arms to keep the hazard ratio constant"
            )

    @classmethod
    def from_hazard_ratio(cls, control: SurvivalModel, hazard_ratio: float) -> "ModelPair":
        if not hazard_ratio > 0:
            raise ValueError("hazard ratio must be positive")
        return cls(control, control.with_scale(control.scale * hazard_ratio))

    @property
    def family(self) -> str:
        return self.control.family

    @property
    def hazard_ratio(self) -> float:
        return self.experimental.scale / self.control.scale


def rate_from_median(family: str, shape: float, median: float) -> float:
    """Scale parameter implied by a median event time.

    Inverts S(median) = 1/2 for the exponential (shape must be 1) and
    Weibull families: scale = ln(2) / median**shape.
    """
    if family not in ("exponential", "weibull"):
        raise ValueError(f"unsupported family for median conversion: {family!r}")
    if family == "exponential" and shape != 1:
        raise ValueError("exponential family requires shape == 1")
    if not median > 0:
        raise ValueError("median must be positive")
    if not shape > 0:
        raise ValueError("shape must be positive")
    return math.log(2.0) / median**shape
