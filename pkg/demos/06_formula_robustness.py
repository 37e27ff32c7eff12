# How much does assuming the wrong survival family cost?
#
# For each true-model grid point: generate small pilot trials, fit each
# candidate family, average coefficients, size the trial with each
# family's formula, then simulate at the sized N generating from the
# true model. A formula is robust when its empirical power stays near
# the nominal 0.80 even though the family is misspecified.
#
# This is a desk-scale run (few hundred replicates). The `curves` CLI
# subcommand runs the same machinery at full replication and writes the
# fixed-schema CSV.

from survplan import FollowupWindow, ScenarioGrid, Superiority
from survplan.simulator import PilotSpec, run_grid

print("true model: Weibull, decreasing vs constant vs increasing hazard")
grid = ScenarioGrid(
    family="weibull",
    shapes=(0.5, 1.0, 1.5),
    scales=(0.5,),
    censor_hazards=(0.2,),
    window=FollowupWindow(6.0, 2.0),
    hypotheses=(Superiority(1.0 / 1.5),),
)
rows = run_grid(grid, ("exponential", "weibull", "gompertz"),
                replicates=400, master_seed=11, pilot=PilotSpec(seed=11))

print("shape  formula       N/group   power")
for row in rows:
    print(f"{row.shape:5.1f}  {row.formula_family:12s} {row.n_per_group:7d}  "
          f"{row.power:.3f}")

print("\ntrue model: Gompertz with heavy censoring")
grid = ScenarioGrid(
    family="gompertz",
    shapes=(1.5,),
    scales=(0.1,),
    censor_hazards=(0.2,),
    window=FollowupWindow(2.0, 1.0),
    hypotheses=(Superiority(1.0 / 1.5),),
)
rows = run_grid(grid, ("exponential", "weibull", "gompertz"),
                replicates=400, master_seed=12, pilot=PilotSpec(seed=12))
print("shape  formula       N/group   power")
for row in rows:
    print(f"{row.shape:5.1f}  {row.formula_family:12s} {row.n_per_group:7d}  "
          f"{row.power:.3f}")
print("\nthe Weibull formula tracks the nominal power most closely when the")
print("assumed family is wrong; the exponential formula drifts with the")
print("shape of the true hazard and the censoring rate.")
