"""Trial generation, pilot estimation and empirical power."""

import math

import numpy as np
import pytest

from survplan.design import NonInferiority, Superiority
from survplan.events import FollowupWindow, prob_event
from survplan.models import Exponential, Gompertz, ModelPair, Weibull
from survplan.simulator import (
    PilotSpec,
    ScenarioGrid,
    TrialSpec,
    empirical_power,
    generate_trial,
    pilot_parameters,
    run_grid,
)

EXAMPLE_PAIR = ModelPair.from_hazard_ratio(Exponential(0.139), 1.0)
EXAMPLE_WINDOW = FollowupWindow(24.0, 22.0)


class TestGenerateTrial:
    def test_identical_seeds_identical_records(self):
        spec = TrialSpec(50, EXAMPLE_PAIR, 0.05, EXAMPLE_WINDOW)
        a = generate_trial(spec, 123)
        b = generate_trial(spec, 123)
        assert np.array_equal(a.time, b.time)
        assert np.array_equal(a.event, b.event)
        assert np.array_equal(a.entry, b.entry)
        c = generate_trial(spec, 124)
        assert not np.array_equal(a.time, c.time)

    def test_uncensored_long_followup_all_events(self):
        spec = TrialSpec(200, EXAMPLE_PAIR, 0.0, FollowupWindow(1e6, 22.0))
        trial = generate_trial(spec, 1)
        assert np.all(trial.event == 1)

    def test_observed_time_never_exceeds_administrative_horizon(self):
        spec = TrialSpec(500, EXAMPLE_PAIR, 0.1, EXAMPLE_WINDOW)
        trial = generate_trial(spec, 2)
        horizon = EXAMPLE_WINDOW.total - trial.entry
        assert np.all(trial.time <= horizon + 1e-12)
        assert np.all((trial.entry >= 0) & (trial.entry <= 22.0))
        assert np.all((trial.arm[:500] == 0) & (trial.arm[500:] == 1))

    def test_event_fraction_matches_event_probability(self):
        spec = TrialSpec(50_000, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)
        trial = generate_trial(spec, 3)
        assert trial.event.mean() == pytest.approx(0.989, abs=1e-3)

    @pytest.mark.parametrize(
        "control,phi",
        [
            (Exponential(0.139), 0.0),
            (Exponential(0.3), 0.1),
            (Weibull(0.31, 0.5), 0.0),
            (Weibull(0.1, 1.5), 0.05),
            (Gompertz(0.15, 0.4), 0.0),
            (Gompertz(0.05, 0.8), 0.1),
        ],
    )
    def test_event_fraction_per_family(self, control, phi):
        pair = ModelPair.from_hazard_ratio(control, 1.0)
        n = 20_000
        spec = TrialSpec(n, pair, phi, EXAMPLE_WINDOW)
        trial = generate_trial(spec, 4)
        expected = prob_event(control, phi, EXAMPLE_WINDOW)
        se = math.sqrt(expected * (1 - expected) / (2 * n))
        assert abs(trial.event.mean() - expected) <= 3 * se

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            TrialSpec(1, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)


class TestPilotParameters:
    def test_single_trial_average_equals_that_fit(self):
        from survplan.inference import parametric_fit

        pilot = PilotSpec(n_trials=1, n_subjects=50, seed=11)
        estimates = pilot_parameters(EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW, pilot)
        trial = generate_trial(
            TrialSpec(25, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW),
            np.random.SeedSequence(11, spawn_key=(0,)),
        )
        fit = parametric_fit(trial, "exponential")
        est = estimates["exponential"]
        assert est.pair.control.rate == pytest.approx(fit.scale0, rel=1e-12)
        assert est.pair.hazard_ratio == pytest.approx(math.exp(fit.log_hr), rel=1e-12)

    def test_large_pilot_recovers_exponential_truth(self):
        pilot = PilotSpec(n_trials=50, n_subjects=5000, seed=12)
        estimates = pilot_parameters(
            EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW, pilot, families=("exponential",)
        )
        est = estimates["exponential"]
        assert est.n_converged == 50
        assert est.pair.control.rate == pytest.approx(0.139, rel=0.02)
        assert est.pair.hazard_ratio == pytest.approx(1.0, abs=0.02)

    def test_weibull_pilot_shape_near_one_for_exponential_truth(self):
        pilot = PilotSpec(n_trials=20, n_subjects=50, seed=13)
        estimates = pilot_parameters(
            EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW, pilot, families=("weibull",)
        )
        est = estimates["weibull"]
        assert est.usable
        assert est.pair.control.shape == pytest.approx(1.0, abs=0.15)

    def test_unusable_family_flagged(self):
        # drown every pilot trial in censoring so no arm retains an event
        pair = ModelPair.from_hazard_ratio(Exponential(1e-6), 1.0)
        pilot = PilotSpec(n_trials=3, n_subjects=10, seed=14)
        estimates = pilot_parameters(
            pair, 100.0, FollowupWindow(0.01, 0.01), pilot, families=("exponential",)
        )
        assert not estimates["exponential"].usable
        assert estimates["exponential"].n_converged == 0

    def test_pilot_spec_validation(self):
        with pytest.raises(ValueError):
            PilotSpec(n_trials=0)
        with pytest.raises(ValueError):
            PilotSpec(n_subjects=49)


class TestEmpiricalPower:
    def test_reproducible_given_master_seed(self):
        spec = TrialSpec(60, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)
        a = empirical_power(spec, NonInferiority(1.4), 0.05, 300, master_seed=7)
        b = empirical_power(spec, NonInferiority(1.4), 0.05, 300, master_seed=7)
        assert (a.rejections, a.non_converged) == (b.rejections, b.non_converged)

    def test_threading_preserves_results(self):
        spec = TrialSpec(60, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)
        serial = empirical_power(spec, NonInferiority(1.4), 0.05, 400, 7, threads=1)
        threaded = empirical_power(spec, NonInferiority(1.4), 0.05, 400, 7, threads=4)
        assert serial.rejections == threaded.rejections
        assert serial.non_converged == threaded.non_converged

    def test_superiority_size_under_null(self):
        pair = ModelPair.from_hazard_ratio(Exponential(0.139), 1.0)
        spec = TrialSpec(100, pair, 0.0, EXAMPLE_WINDOW)
        est = empirical_power(spec, Superiority(1.5), 0.05, 2000, master_seed=8)
        assert est.power == pytest.approx(0.05, abs=0.015)

    def test_non_inferiority_example_design_power(self):
        spec = TrialSpec(141, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)
        est = empirical_power(spec, NonInferiority(1.40), 0.05, 2000, master_seed=9)
        assert 0.77 <= est.power <= 0.83

    def test_progress_callback_monotone(self):
        spec = TrialSpec(50, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)
        seen = []
        empirical_power(
            spec, NonInferiority(1.4), 0.05, 450, 10, progress=seen.append
        )
        assert seen == sorted(seen)
        assert seen[-1] == 450


class TestRunGrid:
    def test_single_point_reduces_to_one_row_per_family(self):
        grid = ScenarioGrid(
            family="weibull",
            shapes=(1.0,),
            scales=(0.5,),
            censor_hazards=(0.0,),
            window=FollowupWindow(6.0, 2.0),
            hypotheses=(Superiority(1.0 / 1.5),),
        )
        rows = run_grid(grid, ("exponential", "weibull", "gompertz"), 50, 1,
                        PilotSpec(seed=2))
        assert len(rows) == 3
        assert [r.formula_family for r in rows] == ["exponential", "weibull", "gompertz"]
        for row in rows:
            assert row.true_family == "weibull"
            assert row.replicates == 50
            assert row.power is not None

    def test_weibull_truth_shape_one_formulas_agree(self):
        grid = ScenarioGrid(
            family="weibull",
            shapes=(1.0,),
            scales=(0.5,),
            censor_hazards=(0.0,),
            window=FollowupWindow(6.0, 2.0),
            hypotheses=(Superiority(1.0 / 1.5),),
        )
        rows = run_grid(grid, ("exponential", "weibull"), 1000, 20240815,
                        PilotSpec(seed=3))
        p_exp, p_weib = rows[0], rows[1]
        joint_se = math.sqrt(p_exp.se**2 + p_weib.se**2)
        assert abs(p_exp.power - p_weib.power) <= 3 * joint_se

    def test_true_params_bypass_uses_true_family_only(self):
        grid = ScenarioGrid(
            family="exponential",
            shapes=(1.0,),
            scales=(0.139,),
            censor_hazards=(0.0,),
            window=EXAMPLE_WINDOW,
            hypotheses=(NonInferiority(1.4),),
        )
        rows = run_grid(
            grid, ("exponential", "weibull"), 100, 5, use_true_params=True
        )
        by_family = {r.formula_family: r for r in rows}
        assert by_family["exponential"].n_per_group == 141
        assert by_family["weibull"].reason == "pilot_unusable"
        assert by_family["weibull"].power is None

    def test_unusable_pilot_row_has_reason(self):
        grid = ScenarioGrid(
            family="exponential",
            shapes=(1.0,),
            scales=(1e-6,),
            censor_hazards=(100.0,),
            window=FollowupWindow(0.01, 0.01),
            hypotheses=(NonInferiority(1.4),),
        )
        rows = run_grid(grid, ("exponential",), 50, 6, PilotSpec(3, 10, 1))
        assert rows[0].power is None
        assert rows[0].reason == "pilot_unusable"

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            ScenarioGrid(
                family="lognormal",
                shapes=(1.0,),
                scales=(0.1,),
                censor_hazards=(0.0,),
                window=EXAMPLE_WINDOW,
                hypotheses=(NonInferiority(1.4),),
            )
        with pytest.raises(ValueError):
            ScenarioGrid(
                family="weibull",
                shapes=(),
                scales=(0.1,),
                censor_hazards=(0.0,),
                window=EXAMPLE_WINDOW,
                hypotheses=(NonInferiority(1.4),),
            )


class TestDesignPowerRoundTrip:
    def test_true_parameter_sizing_hits_nominal_power(self):
        # sizing and simulating under the same family and true parameters
        # must land near the nominal 0.8 (checked at full replication in
        # the acceptance suite; a tighter seed-stable variant here)
        spec = TrialSpec(141, EXAMPLE_PAIR, 0.0, EXAMPLE_WINDOW)
        est = empirical_power(spec, NonInferiority(1.40), 0.05, 4000, master_seed=16)
        assert 0.78 <= est.power <= 0.82
