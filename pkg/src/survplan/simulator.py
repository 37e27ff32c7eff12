"""Monte Carlo verification of trial designs.

The engine reproduces the standard simulation protocol for two-arm
time-to-event trials: per subject an entry time is drawn from the accrual
pattern on [0, R], an event time from the arm's survival model, and an
exponential loss time; the observed time is the minimum of the event
time, the loss time and the administrative horizon Tf + R - entry. A
replicate is analysed with a Cox fit of the arm indicator and the design
hypothesis' decision rule:

    superiority      reject when the two-sided Wald p-value < alpha
    non-inferiority  reject when the upper (1 - alpha) confidence limit
                     for the hazard ratio falls below the margin

Empirical power is the rejection fraction over replicates; replicates
whose fit does not converge count as non-rejections and are tallied.

Seeding is splittable and counter-based: replicate i uses the stream
keyed by (master_seed, i), so results are independent of execution order
and of how many workers run the loop. The optional thread pool obeys the
SURVPLAN_THREADS environment variable.

Nuisance parameters for the sizing formulas can be estimated the way a
real planner would: fit each candidate family to a batch of small pilot
trials generated from the true models, average the coefficients on the
fitting (log) scale, and back-transform. Grid scenarios tie it together,
producing one power curve row per (grid point, assumed formula family).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .design import (
    DesignInputs,
    NoObservableEventsError,
    NonInferiority,
    Superiority,
    required_sample_size,
)
from .events import AccrualPattern, FollowupWindow, UNIFORM_ACCRUAL
from .inference import TrialData, cox_fit, hr_confidence_interval, parametric_fit, wald_test
from .models import Exponential, Gompertz, ModelPair, Weibull
from .numerics import QuadratureError

__all__ = [
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
    "FAMILIES",
]

FAMILIES = ("exponential", "weibull", "gompertz")


@dataclass(frozen=True)
class TrialSpec:
    """One simulated trial: balanced arms generated from the true models."""

    n_per_group: int
    models: ModelPair
    censor_hazard: float | tuple[float, float]
    window: FollowupWindow
    accrual: AccrualPattern = UNIFORM_ACCRUAL

    def __post_init__(self):
        if self.n_per_group < 2:
            raise ValueError("n_per_group must be at least 2")

    def censor_hazards(self) -> tuple[float, float]:
        if isinstance(self.censor_hazard, (tuple, list)):
            pair = (float(self.censor_hazard[0]), float(self.censor_hazard[1]))
        else:
            pair = (float(self.censor_hazard), float(self.censor_hazard))
        if min(pair) < 0:
            raise ValueError("censoring hazards must be nonnegative")
        return pair


@dataclass(frozen=True)
class PilotSpec:
    """Pilot estimation protocol: a batch of small balanced trials."""

    n_trials: int = 20
    n_subjects: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be at least 1")
        if self.n_subjects < 4 or self.n_subjects % 2:
            raise ValueError("n_subjects must be an even number >= 4")


@dataclass(frozen=True)
class PilotEstimate:
    """Averaged-coefficient estimate of one family's model pair."""

    family: str
    pair: ModelPair | None
    n_converged: int
    n_trials: int

    @property
    def usable(self) -> bool:
        return self.pair is not None


@dataclass(frozen=True)
class PowerEstimate:
    replicates: int
    rejections: int
    non_converged: int

    @property
    def power(self) -> float:
        return self.rejections / self.replicates

    @property
    def se(self) -> float:
        p = self.power
        return math.sqrt(p * (1.0 - p) / self.replicates)


def _rng_for(master_seed: int, index: int) -> np.random.Generator:
    # counter-based splittable stream: one child per replicate index
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def generate_trial(spec: TrialSpec, seed) -> TrialData:
    """Simulate one trial; deterministic given the seed.

    seed may be an int, a SeedSequence or a Generator. Draw order is
    fixed (entries, event uniforms, loss times) so identical seeds give
    identical records.
    """
    rng = np.random.default_rng(seed)
    n = spec.n_per_group
    total = 2 * n
    phi0, phi1 = spec.censor_hazards()
    arm = np.repeat(np.array([0, 1], dtype=np.int8), n)
    entry = spec.accrual.sample(rng, total, spec.window.accrual_duration)
    u = rng.random(total)
    t0 = np.empty(total)
    t0[:n] = spec.models.control.sample_event_time(u[:n])
    t0[n:] = spec.models.experimental.sample_event_time(u[n:])
    loss = np.full(total, np.inf)
    if phi0 > 0:
        loss[:n] = rng.exponential(1.0 / phi0, n)
    if phi1 > 0:
        loss[n:] = rng.exponential(1.0 / phi1, n)
    horizon = spec.window.total - entry
    time = np.minimum(np.minimum(t0, loss), horizon)
    event = ((t0 <= loss) & (t0 <= horizon)).astype(np.int8)
    return TrialData(arm=arm, entry=entry, time=time, event=event)


def _family_model(family: str, scale: float, shape: float | None):
    if family == "exponential":
        return Exponential(rate=scale)
    if family == "weibull":
        return Weibull(scale=scale, shape=shape)
    if family == "gompertz":
        return Gompertz(scale=scale, shape=shape)
    raise ValueError(f"unknown family {family!r}")


def pilot_parameters(
    true_pair: ModelPair,
    censor_hazard,
    window: FollowupWindow,
    pilot: PilotSpec = PilotSpec(),
    accrual: AccrualPattern = UNIFORM_ACCRUAL,
    families: Sequence[str] = FAMILIES,
) -> dict[str, PilotEstimate]:
    """Estimate each family's parameters from a batch of pilot trials.

    Every pilot trial is generated from the true pair with the same
    censoring and accrual mechanics as the main simulation, then fitted
    with each candidate family. Coefficients are averaged across the
    converged fits on the fitting scale (log scale0, log hazard ratio,
    log shape) and back-transformed. A family with no converged fits is
    returned as unusable.
    """
    spec = TrialSpec(
        n_per_group=pilot.n_subjects // 2,
        models=true_pair,
        censor_hazard=censor_hazard,
        window=window,
        accrual=accrual,
    )
    trials = []
    for i in range(pilot.n_trials):
        seed = np.random.SeedSequence(pilot.seed, spawn_key=(i,))
        trials.append(generate_trial(spec, seed))

    out: dict[str, PilotEstimate] = {}
    for family in families:
        coefs = []
        for trial in trials:
            try:
                fit = parametric_fit(trial, family)
            except ValueError:
                continue
            if not fit.converged:
                continue
            log_shape = math.log(fit.shape) if fit.shape is not None else 0.0
            coefs.append((math.log(fit.scale0), fit.log_hr, log_shape))
        if not coefs:
            out[family] = PilotEstimate(family, None, 0, pilot.n_trials)
            continue
        mean_lscale, mean_loghr, mean_lshape = np.mean(np.asarray(coefs), axis=0)
        scale0 = math.exp(mean_lscale)
        shape = math.exp(mean_lshape) if family != "exponential" else None
        control = _family_model(family, scale0, shape)
        pair = ModelPair(control, control.with_scale(scale0 * math.exp(mean_loghr)))
        out[family] = PilotEstimate(family, pair, len(coefs), pilot.n_trials)
    return out


def _decide(trial: TrialData, hypothesis, alpha: float) -> tuple[bool, bool]:
    """(rejected, converged) for one replicate under the decision rule."""
    try:
        fit = cox_fit(trial)
    except ValueError:
        return False, False
    if not fit.converged:
        return False, False
    if isinstance(hypothesis, Superiority):
        return wald_test(fit, 0.0).p_two_sided < alpha, True
    _, upper = hr_confidence_interval(fit, level=1.0 - alpha)
    return upper < hypothesis.margin, True


def _run_replicates(spec, hypothesis, alpha, master_seed, indices) -> tuple[int, int]:
    rejections = 0
    non_converged = 0
    for i in indices:
        trial = generate_trial(spec, _rng_for(master_seed, i))
        rejected, converged = _decide(trial, hypothesis, alpha)
        rejections += rejected
        non_converged += not converged
    return rejections, non_converged


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("SURVPLAN_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return 1


def empirical_power(
    spec: TrialSpec,
    hypothesis,
    alpha: float = 0.05,
    replicates: int = 10_000,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    progress=None,
) -> PowerEstimate:
    """Estimate power by simulating independent replicates.

    Results are a pure function of (spec, hypothesis, alpha, replicates,
    master_seed): replicate seeds are derived from the master seed and
    the replicate index, so the reduction is identical no matter how the
    indices are chunked across threads. `progress`, if given, is called
    with the running count of completed replicates.
    """
    if replicates < 1:
        raise ValueError("replicates must be positive")
    workers = _thread_count(threads)
    chunk = 200
    ranges = [range(a, min(a + chunk, replicates)) for a in range(0, replicates, chunk)]
    rejections = 0
    non_converged = 0
    done = 0
    if workers == 1:
        for r in ranges:
            rj, nc = _run_replicates(spec, hypothesis, alpha, master_seed, r)
            rejections += rj
            non_converged += nc
            done += len(r)
            if progress is not None:
                progress(done)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_replicates, spec, hypothesis, alpha, master_seed, r)
                for r in ranges
            ]
            for fut, r in zip(futures, ranges):
                rj, nc = fut.result()
                rejections += rj
                non_converged += nc
                done += len(r)
                if progress is not None:
                    progress(done)
    return PowerEstimate(
        replicates=replicates, rejections=rejections, non_converged=non_converged
    )


@dataclass(frozen=True)
class ScenarioGrid:
    """Axes of true-model scenarios to sweep."""

    family: str
    shapes: tuple
    scales: tuple
    censor_hazards: tuple
    window: FollowupWindow
    hypotheses: tuple
    accrual: AccrualPattern = UNIFORM_ACCRUAL

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        for name in ("shapes", "scales", "censor_hazards", "hypotheses"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must be nonempty")

    def points(self):
        for shape in self.shapes:
            for scale in self.scales:
                for phi in self.censor_hazards:
                    for hyp in self.hypotheses:
                        yield shape, scale, phi, hyp


@dataclass(frozen=True)
class CurveRow:
    """One power-curve observation: a grid point sized by one formula family."""

    true_family: str
    shape: float | None
    scale0: float
    phi: float
    hypothesis: str
    margin: float | None
    alt_hr: float
    formula_family: str
    n_per_group: int | None
    power: float | None
    se: float | None
    non_converged: int
    replicates: int
    seed: int
    reason: str = ""


def _derived_seed(master_seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(master_seed, spawn_key=tuple(key)).generate_state(1)[0])


def run_grid(
    grid: ScenarioGrid,
    formula_families: Sequence[str],
    replicates: int,
    master_seed: int,
    pilot: PilotSpec = PilotSpec(),
    alpha: float = 0.05,
    power: float = 0.8,
    *,
    use_true_params: bool = False,
    threads: int | None = None,
) -> list[CurveRow]:
    """Sweep the grid, sizing each point with each assumed formula family.

    Per point: estimate nuisance parameters by pilot trials (or plug in
    the true ones), compute the per-group size under each candidate
    family, then estimate empirical power generating from the true
    models. Rows with an unusable pilot family carry a null power and a
    reason code.
    """
    rows: list[CurveRow] = []
    for point_idx, (shape, scale, phi, hypothesis) in enumerate(grid.points()):
        true_shape = None if grid.family == "exponential" else shape
        control = _family_model(grid.family, scale, true_shape)
        true_pair = ModelPair.from_hazard_ratio(control, hypothesis.alt_hazard_ratio)
        margin = hypothesis.margin if isinstance(hypothesis, NonInferiority) else None

        if use_true_params:
            estimates = {
                fam: PilotEstimate(fam, true_pair, 0, 0)
                if fam == grid.family
                else None
                for fam in formula_families
            }
        else:
            pilot_seed = _derived_seed(master_seed, point_idx, 0)
            estimates = pilot_parameters(
                true_pair,
                phi,
                grid.window,
                PilotSpec(pilot.n_trials, pilot.n_subjects, pilot_seed),
                grid.accrual,
                families=tuple(formula_families),
            )

        for fam_idx, family in enumerate(formula_families):
            est = estimates.get(family)
            seed = _derived_seed(master_seed, point_idx, 1 + fam_idx)
            base = dict(
                true_family=grid.family,
                shape=true_shape,
                scale0=scale,
                phi=phi,
                hypothesis=hypothesis.kind,
                margin=margin,
                alt_hr=hypothesis.alt_hazard_ratio,
                formula_family=family,
                replicates=replicates,
                seed=seed,
            )
            if est is None or not est.usable:
                rows.append(
                    CurveRow(
                        **base,
                        n_per_group=None,
                        power=None,
                        se=None,
                        non_converged=0,
                        reason="pilot_unusable",
                    )
                )
                continue
            sizing_control = est.pair.control
            sizing_pair = ModelPair.from_hazard_ratio(
                sizing_control, hypothesis.alt_hazard_ratio
            )
            design = DesignInputs(
                hypothesis=hypothesis,
                alpha=alpha,
                power=power,
                window=grid.window,
                censor_hazard=phi,
                models=sizing_pair,
                accrual=grid.accrual,
            )
            try:
                n = required_sample_size(design).n_per_group
            except (NoObservableEventsError, QuadratureError) as exc:
                rows.append(
                    CurveRow(
                        **base,
                        n_per_group=None,
                        power=None,
                        se=None,
                        non_converged=0,
                        reason=f"sizing_failed: {exc}",
                    )
                )
                continue
            spec = TrialSpec(
                n_per_group=n,
                models=true_pair,
                censor_hazard=phi,
                window=grid.window,
                accrual=grid.accrual,
            )
            est_power = empirical_power(
                spec,
                hypothesis,
                alpha=alpha,
                replicates=replicates,
                master_seed=seed,
                threads=threads,
            )
            rows.append(
                CurveRow(
                    **base,
                    n_per_group=n,
                    power=est_power.power,
                    se=est_power.se,
                    non_converged=est_power.non_converged,
                )
            )
    return rows
