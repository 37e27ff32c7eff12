# Solving the follow-up duration for a fixed enrollment target.
#
# The total size N(Tf) decreases as follow-up grows, from its value at
# Tf=0 down to a positive asymptote, so a target is solvable only
# strictly between those bounds. Outside them the solver raises a
# diagnostic carrying both bound values.

from survplan import (
    DesignInputs,
    Exponential,
    FollowupWindow,
    InfeasibleTargetError,
    ModelPair,
    NonInferiority,
    required_sample_size,
    solve_followup_duration,
)

design = DesignInputs(
    hypothesis=NonInferiority(1.40, 1.0),
    alpha=0.05,
    power=0.8,
    window=FollowupWindow(24.0, 22.0),
    censor_hazard=0.05,
    models=ModelPair.from_hazard_ratio(Exponential(0.139), 1.0),
)

res = required_sample_size(design)
print(f"design at followup 24: N/group {res.n_per_group} (real {res.n_per_group_real:.3f})")

# Round trip: the real-valued size at Tf=24 inverts back to 24.
target = 2.0 * res.n_per_group_real
print(f"inverting total {target:.3f} -> followup "
      f"{solve_followup_duration(target, design):.6f}")

print("\nfollow-up needed for a range of enrollment targets:")
for n_target in (460, 420, 400, 390, 385):
    tf = solve_followup_duration(float(n_target), design)
    print(f"  total {n_target:4d} -> followup {tf:8.3f}")

print("\ninfeasible targets produce diagnoses with both bounds:")
for n_target in (150.0, 5000.0):
    try:
        solve_followup_duration(n_target, design)
    except InfeasibleTargetError as err:
        print(f"  target {n_target:7.1f}: {err.kind:5s} range "
              f"({err.lower_bound:.2f}, {err.upper_bound:.2f})")
