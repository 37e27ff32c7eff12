# Reproduce the two worked-example sizing tables.
#
# Example A (superiority): detect a 1.5x hazard difference, median 13 in
# the control arm, 48-month accrual, 156-month follow-up.
# Example B (non-inferiority): margin 1.40 on the hazard ratio, equal
# true efficacy, median 5, 22-month accrual, 24-month follow-up.

from survplan import (
    DesignInputs,
    Exponential,
    FollowupWindow,
    ModelPair,
    NonInferiority,
    Superiority,
    Weibull,
    effect_term,
    rate_from_median,
    required_sample_size,
)


def control_model(shape, median):
    scale = rate_from_median("weibull", shape, median)
    return Exponential(scale) if shape == 1.0 else Weibull(scale, shape)


def size(hypothesis, control, phi, followup, accrual):
    pair = ModelPair.from_hazard_ratio(control, hypothesis.alt_hazard_ratio)
    design = DesignInputs(
        hypothesis=hypothesis, alpha=0.05, power=0.8,
        window=FollowupWindow(followup, accrual), censor_hazard=phi, models=pair,
    )
    return required_sample_size(design)


print("Superiority, effect 1.5, Tf=156, R=48, alpha=0.05, power=0.8")
st = Superiority(1.5)
print(f"  events-scale term {effect_term(st, 0.05, 0.8):.3f}")
print("  shape  scale0   phi    N/group  events")
for shape in (0.5, 1.0, 1.5):
    control = control_model(shape, 13.0)
    for phi in (0.0, 0.05):
        res = size(st, control, phi, 156.0, 48.0)
        print(f"  {shape:4.1f} {control.scale:8.4f} {phi:6.2f} {res.n_per_group:8d} "
              f"{res.expected_events:7d}")

print("\nNon-inferiority, margin 1.40, Tf=24, R=22, alpha=0.05, power=0.8")
nt = NonInferiority(1.40, 1.0)
print(f"  events-scale term {effect_term(nt, 0.05, 0.8):.3f}")
print("  shape  scale0   phi    N/group  events   E0")
for shape in (0.5, 1.0, 1.5):
    control = control_model(shape, 5.0)
    for phi in (0.0, 0.05):
        res = size(nt, control, phi, 24.0, 22.0)
        print(f"  {shape:4.1f} {control.scale:8.4f} {phi:6.2f} {res.n_per_group:8d} "
              f"{res.expected_events:7d} {res.e0:8.4f}")
