# The chance a subject contributes an observed event, and what moves it.
#
# A subject entering at r in [0, R] is watched for Tf + R - r; random
# loss to follow-up is exponential. The event probability E is what the
# sample-size formulas divide by, so anything that lowers E inflates N.

import numpy as np

from survplan import (
    Exponential,
    FollowupWindow,
    TruncatedExponentialAccrual,
    Weibull,
    prob_event,
    prob_event_asymptotic,
    prob_event_at_accrual_end,
)

window = FollowupWindow(followup=24.0, accrual_duration=22.0)
model = Exponential(0.139)

print("exponential, no loss to follow-up:")
print("  E over the full window     ", prob_event(model, 0.0, window))
print("  E if the study stopped at accrual end",
      prob_event_at_accrual_end(model, 0.0, 22.0))
print("  E with unbounded follow-up ", prob_event_asymptotic(model, 0.0))

print("\nloss to follow-up drags E down (phi = exponential loss hazard):")
for phi in (0.0, 0.02, 0.05, 0.1, 0.2):
    print(f"  phi={phi:4.2f}  E={prob_event(model, phi, window):.4f}"
          f"   E_inf={prob_event_asymptotic(model, phi):.4f}")

print("\ndecreasing-hazard Weibull needs longer to accumulate events:")
weib = Weibull(0.310, 0.5)
for tf in (6.0, 12.0, 24.0, 48.0):
    e = prob_event(weib, 0.0, FollowupWindow(tf, 22.0))
    print(f"  followup={tf:5.1f}  E={e:.4f}")

print("\naccrual pattern matters: earlier entry means longer observation")
for name, accrual in (
    ("uniform", None),
    ("front-loaded (rate +0.3)", TruncatedExponentialAccrual(0.3)),
    ("back-loaded (rate -0.3)", TruncatedExponentialAccrual(-0.3)),
):
    if accrual is None:
        e = prob_event(weib, 0.05, window)
    else:
        e = prob_event(weib, 0.05, window, accrual)
    print(f"  {name:26s} E={e:.4f}")

# Quadrature agrees with brute-force simulation.
rng = np.random.default_rng(1)
n = 500_000
entry = rng.random(n) * 22.0
t0 = weib.sample_event_time(rng.uniform(1e-15, 1.0, n))
loss = rng.exponential(1.0 / 0.05, n)
observed = (t0 <= loss) & (t0 <= window.total - entry)
print(f"\nMonte Carlo check (n={n}): {observed.mean():.4f} "
      f"vs quadrature {prob_event(weib, 0.05, window):.4f}")
