"""Cox and parametric fits against brute-force oracles."""

import math

import numpy as np
import pytest
from scipy.stats import norm

from survplan.events import FollowupWindow
from survplan.inference import (
    FitResult,
    SubjectRecord,
    TrialData,
    cox_fit,
    hr_confidence_interval,
    parametric_fit,
    wald_test,
)
from survplan.models import ModelPair, Weibull
from survplan.simulator import TrialSpec, generate_trial


def partial_loglik_oracle(records, beta):
    """Breslow partial log likelihood, written by direct risk-set enumeration."""
    total = 0.0
    for rec in records:
        if rec.event != 1:
            continue
        at_risk = [other for other in records if other.time >= rec.time]
        denom = sum(math.exp(beta * other.arm) for other in at_risk)
        total += beta * rec.arm - math.log(denom)
    return total


FOUR_SUBJECTS = [
    SubjectRecord(arm=0, entry=0.0, time=2.0, event=1),
    SubjectRecord(arm=1, entry=0.0, time=1.0, event=1),
    SubjectRecord(arm=0, entry=0.0, time=4.0, event=0),
    SubjectRecord(arm=1, entry=0.0, time=3.0, event=1),
]


class TestCoxFit:
    def test_four_subject_grid_search_oracle(self):
        grid = np.arange(-5.0, 5.0, 1e-4)
        logliks = [partial_loglik_oracle(FOUR_SUBJECTS, b) for b in grid]
        oracle_beta = grid[int(np.argmax(logliks))]
        fit = cox_fit(FOUR_SUBJECTS)
        assert fit.converged
        assert fit.log_hr == pytest.approx(oracle_beta, abs=1e-4)
        assert fit.loglik == pytest.approx(
            partial_loglik_oracle(FOUR_SUBJECTS, fit.log_hr), abs=1e-10
        )

    def test_arm_permutation_negates_estimate(self):
        flipped = [
            SubjectRecord(1 - r.arm, r.entry, r.time, r.event) for r in FOUR_SUBJECTS
        ]
        a = cox_fit(FOUR_SUBJECTS)
        b = cox_fit(flipped)
        assert b.log_hr == pytest.approx(-a.log_hr, abs=1e-10)
        assert b.se == pytest.approx(a.se, rel=1e-12)

    def test_symmetric_event_times_give_zero(self):
        records = [
            SubjectRecord(0, 0.0, 1.0, 1),
            SubjectRecord(0, 0.0, 2.5, 1),
            SubjectRecord(1, 0.0, 1.0, 1),
            SubjectRecord(1, 0.0, 2.5, 1),
        ]
        fit = cox_fit(records)
        assert fit.converged
        assert abs(fit.log_hr) < 1e-8

    def test_loglik_monotone_over_iterations(self):
        pair = ModelPair.from_hazard_ratio(Weibull(0.3, 0.8), 1.6)
        trial = generate_trial(
            TrialSpec(60, pair, 0.05, FollowupWindow(10.0, 4.0)), seed=99
        )
        fit, path = cox_fit(trial, return_path=True)
        assert fit.converged
        assert all(b >= a - 1e-12 for a, b in zip(path, path[1:]))

    def test_time_rescaling_invariance(self):
        data = TrialData.from_records(FOUR_SUBJECTS)
        scaled = TrialData(
            arm=data.arm, entry=data.entry, time=3.7 * data.time, event=data.event
        )
        a, b = cox_fit(data), cox_fit(scaled)
        assert b.log_hr == a.log_hr
        assert b.se == a.se

    def test_ties_use_shared_risk_set(self):
        # two events at the same time must both see the full risk set
        records = [
            SubjectRecord(0, 0.0, 1.0, 1),
            SubjectRecord(1, 0.0, 1.0, 1),
            SubjectRecord(0, 0.0, 2.0, 0),
            SubjectRecord(1, 0.0, 2.0, 1),
        ]
        fit = cox_fit(records)
        grid = np.arange(-5.0, 5.0, 1e-4)
        oracle_beta = grid[int(np.argmax([partial_loglik_oracle(records, b) for b in grid]))]
        assert fit.log_hr == pytest.approx(oracle_beta, abs=1e-4)

    def test_no_events_rejected(self):
        records = [SubjectRecord(0, 0.0, 1.0, 0), SubjectRecord(1, 0.0, 2.0, 0)]
        with pytest.raises(ValueError):
            cox_fit(records)

    def test_single_arm_rejected(self):
        records = [SubjectRecord(0, 0.0, 1.0, 1), SubjectRecord(0, 0.0, 2.0, 1)]
        with pytest.raises(ValueError):
            cox_fit(records)

    def test_monotone_likelihood_flagged(self):
        records = [
            SubjectRecord(0, 0.0, 1.0, 1),
            SubjectRecord(0, 0.0, 2.0, 1),
            SubjectRecord(1, 0.0, 3.0, 0),
            SubjectRecord(1, 0.0, 4.0, 0),
        ]
        fit = cox_fit(records)
        assert not fit.converged
        assert "one arm" in fit.message
        assert math.isnan(fit.log_hr) and math.isnan(fit.se)


class TestWaldAndInterval:
    def test_null_at_estimate(self):
        fit = FitResult(log_hr=0.0, se=0.2, loglik=0.0, converged=True, iterations=1)
        res = wald_test(fit, 0.0)
        assert res.z == 0.0 and res.p_two_sided == 1.0

    def test_reference_quantile(self):
        fit = FitResult(log_hr=1.959964 * 0.25, se=0.25, loglik=0.0, converged=True, iterations=1)
        assert wald_test(fit, 0.0).p_two_sided == pytest.approx(0.05, abs=1e-6)

    def test_null_shift_is_linear(self):
        fit = FitResult(log_hr=0.3, se=0.11, loglik=0.0, converged=True, iterations=1)
        z0 = wald_test(fit, 0.0).z
        z1 = wald_test(fit, math.log(1.4)).z
        assert z0 - z1 == pytest.approx(math.log(1.4) / 0.11, rel=1e-12)

    def test_refuses_non_converged(self):
        bad = FitResult(math.nan, math.nan, math.nan, False, 50, "diverged")
        with pytest.raises(ValueError):
            wald_test(bad)
        with pytest.raises(ValueError):
            hr_confidence_interval(bad)

    def test_interval_reference(self):
        fit = FitResult(log_hr=0.0, se=0.1, loglik=0.0, converged=True, iterations=1)
        lo, hi = hr_confidence_interval(fit, 0.95)
        z = norm.ppf(0.975)
        assert lo == pytest.approx(math.exp(-z * 0.1), rel=1e-12)
        assert hi == pytest.approx(math.exp(z * 0.1), rel=1e-12)
        assert (round(lo, 3), round(hi, 3)) == (0.822, 1.217)

    def test_interval_collapses_and_is_symmetric(self):
        fit = FitResult(log_hr=0.4, se=0.15, loglik=0.0, converged=True, iterations=1)
        lo, hi = hr_confidence_interval(fit, 1e-9)
        assert lo == pytest.approx(math.exp(0.4), rel=1e-6)
        assert hi == pytest.approx(math.exp(0.4), rel=1e-6)
        lo95, hi95 = hr_confidence_interval(fit, 0.95)
        assert lo95 * hi95 == pytest.approx(math.exp(2 * 0.4), rel=1e-12)

    def test_agreement_with_wald_decision(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            fit = FitResult(
                log_hr=rng.normal(0, 0.5),
                se=rng.uniform(0.05, 0.4),
                loglik=0.0,
                converged=True,
                iterations=1,
            )
            null_hr = math.exp(rng.normal(0, 0.5))
            alpha = 0.05
            p = wald_test(fit, math.log(null_hr)).p_two_sided
            lo, hi = hr_confidence_interval(fit, 1 - alpha)
            assert (p < alpha) == (null_hr < lo or null_hr > hi)


class TestParametricFit:
    def test_exponential_closed_form(self):
        records = [
            SubjectRecord(0, 0.0, 5.0, 1),
            SubjectRecord(0, 0.0, 10.0, 1),
            SubjectRecord(0, 0.0, 15.0, 1),
            SubjectRecord(1, 0.0, 4.0, 1),
            SubjectRecord(1, 0.0, 16.0, 0),
        ]
        fit = parametric_fit(records, "exponential")
        assert fit.scale0 == 3.0 / 30.0
        assert fit.log_hr == pytest.approx(math.log((1.0 / 20.0) / 0.1), rel=1e-12)
        assert fit.shape is None and fit.converged

    def test_needs_event_per_arm(self):
        records = [SubjectRecord(0, 0.0, 5.0, 1), SubjectRecord(1, 0.0, 5.0, 0)]
        with pytest.raises(ValueError):
            parametric_fit(records, "exponential")

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            parametric_fit(FOUR_SUBJECTS, "lognormal")

    def test_weibull_consistency_large_sample(self):
        true = Weibull(0.3, 0.7)
        pair = ModelPair.from_hazard_ratio(true, 1.0)
        window = FollowupWindow(float(true.quantile(0.995)), 2.0)
        trial = generate_trial(TrialSpec(5000, pair, 0.0, window), seed=20240814)
        fit = parametric_fit(trial, "weibull")
        assert fit.converged
        assert fit.shape == pytest.approx(0.7, abs=0.05)
        assert fit.log_hr == pytest.approx(0.0, abs=0.06)

    def test_weibull_profile_grid_oracle(self):
        pair = ModelPair.from_hazard_ratio(Weibull(0.3, 0.7), 1.3)
        trial = generate_trial(TrialSpec(150, pair, 0.05, FollowupWindow(12.0, 4.0)), seed=5)
        fit = parametric_fit(trial, "weibull")

        mask1 = trial.arm == 1
        t0, d0 = trial.time[~mask1], trial.event[~mask1].astype(bool)
        t1, d1 = trial.time[mask1], trial.event[mask1].astype(bool)

        def profile(k):
            # closed-form per-arm scales at fixed shape, independent recode
            s0, s1 = float(np.sum(t0**k)), float(np.sum(t1**k))
            lam0, lam1 = d0.sum() / s0, d1.sum() / s1
            ll = (
                d0.sum() * math.log(lam0)
                + d1.sum() * math.log(lam1)
                + np.sum(np.log(k * t0[d0] ** (k - 1.0)))
                + np.sum(np.log(k * t1[d1] ** (k - 1.0)))
                - (d0.sum() + d1.sum())
            )
            return float(ll)

        grid = np.arange(0.4, 1.2, 1e-3)
        values = np.array([profile(k) for k in grid])
        best = int(np.argmax(values))
        # parabolic refinement around the best grid point
        ks = grid[best - 1 : best + 2]
        vs = values[best - 1 : best + 2]
        denom = vs[0] - 2 * vs[1] + vs[2]
        k_star = ks[1] - 0.5 * (ks[2] - ks[0]) * (vs[2] - vs[0]) / (2 * denom)
        oracle = profile(float(k_star))

        assert fit.loglik == pytest.approx(oracle, abs=1e-6)
        assert fit.loglik >= values.max() - 1e-6
        assert fit.loglik == pytest.approx(profile(fit.shape), abs=1e-9)

    def test_gompertz_recovers_parameters(self):
        from survplan.models import Gompertz

        true = Gompertz(0.1, 0.5)
        pair = ModelPair.from_hazard_ratio(true, 1.0)
        trial = generate_trial(TrialSpec(4000, pair, 0.0, FollowupWindow(12.0, 2.0)), seed=8)
        fit = parametric_fit(trial, "gompertz")
        assert fit.converged
        assert fit.shape == pytest.approx(0.5, abs=0.06)
        assert fit.scale0 == pytest.approx(0.1, rel=0.1)
        assert fit.log_hr == pytest.approx(0.0, abs=0.07)

    def test_exponential_matches_cox_on_exponential_data(self):
        from survplan.models import Exponential

        pair = ModelPair.from_hazard_ratio(Exponential(0.25), 1.4)
        trial = generate_trial(TrialSpec(2000, pair, 0.0, FollowupWindow(8.0, 3.0)), seed=31)
        cox = cox_fit(trial)
        par = parametric_fit(trial, "exponential")
        d0 = int(trial.event[trial.arm == 0].sum())
        d1 = int(trial.event[trial.arm == 1].sum())
        se_par = math.sqrt(1.0 / d0 + 1.0 / d1)
        joint = math.sqrt(cox.se**2 + se_par**2)
        assert abs(par.log_hr - cox.log_hr) <= 3.0 * joint
