"""Trial design engine for time-to-event endpoints.

Computes sample sizes and study durations for superiority and
non-inferiority trials under exponential, Weibull and Gompertz survival
models, and verifies those designs by Monte Carlo simulation with Cox and
parametric inference.
"""

__version__ = "0.1.0"

from .design import (
    DesignInputs,
    InfeasibleTargetError,
    NoObservableEventsError,
    NonInferiority,
    SampleSizeResult,
    Superiority,
    effect_term,
    required_sample_size,
    solve_followup_duration,
    study_duration_summary,
)
from .events import (
    FollowupWindow,
    TabulatedAccrual,
    TruncatedExponentialAccrual,
    UNIFORM_ACCRUAL,
    UniformAccrual,
    prob_event,
    prob_event_asymptotic,
    prob_event_at_accrual_end,
)
from .inference import (
    FitResult,
    ParametricFit,
    SubjectRecord,
    TrialData,
    WaldResult,
    cox_fit,
    hr_confidence_interval,
    parametric_fit,
    wald_test,
)
from .models import Exponential, Gompertz, ModelPair, Weibull, rate_from_median
from .numerics import (
    BracketError,
    IntegralResult,
    QuadratureError,
    QuadratureSettings,
    RootProblem,
    find_root,
    integrate,
)
from .simulator import (
    CurveRow,
    PilotEstimate,
    PilotSpec,
    PowerEstimate,
    ScenarioGrid,
    TrialSpec,
    empirical_power,
    generate_trial,
    pilot_parameters,
    run_grid,
)

__all__ = [
    "__version__",
    # models
    "Exponential",
    "Weibull",
    "Gompertz",
    "ModelPair",
    "rate_from_median",
    # numerics
    "QuadratureSettings",
    "IntegralResult",
    "QuadratureError",
    "RootProblem",
    "BracketError",
    "integrate",
    "find_root",
    # event probabilities
    "FollowupWindow",
    "UniformAccrual",
    "TruncatedExponentialAccrual",
    "TabulatedAccrual",
    "UNIFORM_ACCRUAL",
    "prob_event",
    "prob_event_at_accrual_end",
    "prob_event_asymptotic",
    # design
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
    # inference
    "SubjectRecord",
    "TrialData",
    "FitResult",
    "WaldResult",
    "ParametricFit",
    "cox_fit",
    "wald_test",
    "hr_confidence_interval",
    "parametric_fit",
    # simulation
    "TrialSpec",
    "PilotSpec",
    "PilotEstimate",
    "PowerEstimate",
    "ScenarioGrid",
    "CurveRow",
    "generate_trial",
    "pilot_parameters",
    "empirical_power",
    "run_grid",
]
