"""Sample-size formulas and the follow-up-duration solver.

For a two-arm balanced design the required size per group is driven by
two quantities: an events-scale term

    ets = ((z_{1-alpha/2} + z_{power}) / log_effect)^2

whose double, rounded up, is the integer number of events the trial must
observe; and the per-arm probabilities E0, E1 that a subject contributes
an observed event (see `survplan.events`). The per-group size is the
integer event target spread over those probabilities:

    n_per_group = ceil( (ceil(2 * ets) / 2) * (1/E0 + 1/E1) )

The log effect is ln(hazard ratio under the alternative) for superiority
designs and ln(margin) - ln(alternative hazard ratio) for non-inferiority
designs; the same two-sided normal quantile is used in both, matching the
confidence-interval decision rule applied at analysis time.

Fixing the integer event target before inflating is what reproduces the
reference worked examples exactly; rounding only once at the end
systematically lands one or two subjects lower.

The duration solver inverts the real-valued (un-ceiled) total size as a
function of the follow-up Tf. That function decreases from its value at
Tf = 0 toward a positive limit as Tf grows, so a target is solvable only
strictly between those two bounds; violations raise a diagnostic carrying
both bound values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import norm

from .events import (
    AccrualPattern,
    FollowupWindow,
    UNIFORM_ACCRUAL,
    prob_event,
    prob_event_asymptotic,
)
from .models import ModelPair
from .numerics import DEFAULT_SETTINGS, QuadratureSettings, RootProblem, find_root

__all__ = [
    "Superiority",
    "NonInferiority",
    "DesignInputs",
    "SampleSizeResult",
    "NoObservableEventsError",
    "InfeasibleTargetError",
    "effect_term",
    "required_sample_size",
    "solve_followup_duration",
    "study_duration_summary",
]

_E_FLOOR = 1e-12


@dataclass(frozen=True)
class Superiority:
    """Two-sided test of equal hazards against a given alternative ratio."""

    alt_hazard_ratio: float

    kind = "superiority"

    def __post_init__(self):
        if not self.alt_hazard_ratio > 0:
            raise ValueError("alternative hazard ratio must be positive")
        if self.alt_hazard_ratio == 1.0:
            raise ValueError("alternative hazard ratio must differ from 1")

    @property
    def log_effect(self) -> float:
        return math.log(self.alt_hazard_ratio)


@dataclass(frozen=True)
class NonInferiority:
    """Test that the hazard ratio stays below a margin above one.

    Non-inferiority is declared when the upper confidence limit for the
    hazard ratio falls below the margin; the alternative ratio is where
    the trial is powered (1.0 = identical efficacy).
    """

    margin: float
    alt_hazard_ratio: float = 1.0

    kind = "non_inferiority"

    def __post_init__(self):
        if not self.margin > 1:
            raise ValueError("non-inferiority margin must exceed 1")
        if not self.alt_hazard_ratio > 0:
            raise ValueError("alternative hazard ratio must be positive")
        if not self.alt_hazard_ratio < self.margin:
            raise ValueError("alternative hazard ratio must lie below the margin")

    @property
    def log_effect(self) -> float:
        return math.log(self.margin) - math.log(self.alt_hazard_ratio)


def _censor_pair(censor_hazard) -> tuple[float, float]:
    if isinstance(censor_hazard, (tuple, list)):
        if len(censor_hazard) != 2:
            raise ValueError("per-arm censoring needs exactly two hazards")
        pair = (float(censor_hazard[0]), float(censor_hazard[1]))
    else:
        pair = (float(censor_hazard), float(censor_hazard))
    if not (pair[0] >= 0 and pair[1] >= 0):
        raise ValueError("censoring hazards must be nonnegative")
    return pair


@dataclass(frozen=True)
class DesignInputs:
    """Everything the sizing formulas need.

    censor_hazard may be a single shared value or a (control,
    experimental) pair. The model pair's scale ratio must equal the
    hypothesis' alternative hazard ratio; the experimental arm is assumed
    to be generated by scaling the control hazard by that ratio.
    """

    hypothesis: Superiority | NonInferiority
    alpha: float
    power: float
    window: FollowupWindow
    censor_hazard: float | tuple[float, float]
    models: ModelPair
    accrual: AccrualPattern = UNIFORM_ACCRUAL

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0 < self.power < 1:
            raise ValueError("power must lie in (0, 1)")
        _censor_pair(self.censor_hazard)
        if not math.isclose(
            self.models.hazard_ratio,
            self.hypothesis.alt_hazard_ratio,
            rel_tol=1e-9,
        ):
            raise ValueError(
                "model pair's scale ratio must equal the hypothesis' "
                f"alternative hazard ratio ({self.models.hazard_ratio!r} vs "
                f"{self.hypothesis.alt_hazard_ratio!r})"
            )

    def censor_hazards(self) -> tuple[float, float]:
        return _censor_pair(self.censor_hazard)


@dataclass(frozen=True)
class SampleSizeResult:
    ets: float
    e0: float
    e1: float
    n_per_group: int
    n_total: int
    expected_events: int
    n_per_group_real: float  # before the final per-group ceiling


class NoObservableEventsError(ValueError):
    """An arm's event probability underflowed; the design cannot be sized."""


def effect_term(hypothesis, alpha: float, power: float) -> float:
    """Events-scale term; twice this (rounded up) is the event target."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0 < power < 1:
        raise ValueError("power must lie in (0, 1)")
    log_effect = hypothesis.log_effect
    if log_effect == 0:
        raise ValueError("hypothesis has zero log effect")
    z = norm.ppf(1.0 - alpha / 2.0) + norm.ppf(power)
    return (z / log_effect) ** 2


def _event_probabilities(design: DesignInputs, window: FollowupWindow, settings):
    phi0, phi1 = design.censor_hazards()
    e0 = prob_event(design.models.control, phi0, window, design.accrual, settings=settings)
    e1 = prob_event(
        design.models.experimental, phi1, window, design.accrual, settings=settings
    )
    if min(e0, e1) <= _E_FLOOR:
        raise NoObservableEventsError(
            f"no events observable: per-arm event probabilities ({e0:.3e}, {e1:.3e})"
        )
    return e0, e1


def required_sample_size(
    design: DesignInputs,
    *,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> SampleSizeResult:
    """Per-group and total sample size for a balanced two-arm design."""
    ets = effect_term(design.hypothesis, design.alpha, design.power)
    events_target = math.ceil(2.0 * ets)
    e0, e1 = _event_probabilities(design, design.window, settings)
    n_real = (events_target / 2.0) * (1.0 / e0 + 1.0 / e1)
    n_per_group = math.ceil(n_real)
    return SampleSizeResult(
        ets=ets,
        e0=e0,
        e1=e1,
        n_per_group=n_per_group,
        n_total=2 * n_per_group,
        expected_events=events_target,
        n_per_group_real=n_real,
    )


class InfeasibleTargetError(ValueError):
    """The enrollment target lies outside what any follow-up can deliver.

    kind is "below" when the target undercuts the infinite-follow-up
    limit (no finite follow-up suffices; extend accrual or relax the
    design) and "above" when the target exceeds the zero-follow-up size
    (the trial is already over target when accrual ends). Both bound
    values ride along for diagnostics.
    """

    def __init__(self, kind: str, n_target: float, lower_bound: float, upper_bound: float):
        self.kind = kind
        self.n_target = n_target
        self.lower_bound = lower_bound
        self.upper_bound = upper_bound
        if kind == "below":
            detail = (
                "no finite follow-up suffices; extend the accrual period or "
                "relax the design"
            )
        else:
            detail = "the trial is already over target when accrual ends"
        super().__init__(
            f"total enrollment target {n_target} is infeasible ({kind} the "
            f"solvable range ({lower_bound:.6g}, {upper_bound:.6g})): {detail}"
        )


def solve_followup_duration(
    n_target: float,
    design: DesignInputs,
    *,
    tol: float = 1e-9,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Follow-up duration at which the real-valued total size hits n_target.

    The follow-up stored in design.window is ignored; only its accrual
    duration (and the rest of the design) matters. n_target is a total
    over both groups and must lie strictly between the asymptotic
    (infinite follow-up) size and the zero-follow-up size.
    """
    ets = effect_term(design.hypothesis, design.alpha, design.power)
    events_target = math.ceil(2.0 * ets)
    phi0, phi1 = design.censor_hazards()
    accrual_duration = design.window.accrual_duration

    def total_n(followup: float) -> float:
        window = FollowupWindow(followup, accrual_duration)
        e0, e1 = _event_probabilities(design, window, settings)
        return events_target * (0.5 / e0 + 0.5 / e1) * 2.0

    e0_inf = prob_event_asymptotic(design.models.control, phi0, settings=settings)
    e1_inf = prob_event_asymptotic(design.models.experimental, phi1, settings=settings)
    lower = events_target * (0.5 / e0_inf + 0.5 / e1_inf) * 2.0
    upper = total_n(0.0)
    if not n_target > lower:
        raise InfeasibleTargetError("below", n_target, lower, upper)
    if not n_target < upper:
        raise InfeasibleTargetError("above", n_target, lower, upper)

    hi = max(accrual_duration, 1.0)
    while total_n(hi) > n_target:
        hi *= 2.0
        if hi > 1e9:  # target is above `lower`, so a crossing must exist
            raise RuntimeError("failed to bracket the follow-up duration")
    problem = RootProblem(
        objective=lambda tf: total_n(tf) - n_target,
        bracket_lo=0.0,
        bracket_hi=hi,
        tol=tol,
    )
    return find_root(problem)


def study_duration_summary(design: DesignInputs) -> dict:
    """Echo the study timeline: follow-up, accrual and their total."""
    return {
        "followup": design.window.followup,
        "accrual_duration": design.window.accrual_duration,
        "total_duration": design.window.total,
    }
