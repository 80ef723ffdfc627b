"""
Simulating the loss system
==========================

A discrete-event run gives an independent check of the formula. The
binomial standard error treats blocking events as independent; they are
not, and the batch-means figure shows by how much that understates the
spread for a busy group.
"""

from erlangloss import SimConfig, simulate

for n, lam in ((1, 1.0), (5, 3.0), (10, 10.0)):
    res = simulate(SimConfig(n, lam, arrivals=1_000_000, seed=7))
    print(f"n={n:2d} lam={lam:4.1f}: estimate {res.estimate:.5f} analytic {res.analytic:.5f} "
          f"z={res.z_score:+.2f}  batch/binomial SE {res.batch_std_error / res.std_error:.2f}")

# the blocking probability does not depend on the holding-time distribution
det = simulate(SimConfig(5, 3.0, arrivals=1_000_000, seed=7, service="deterministic"))
print("deterministic holding:", det.estimate, "analytic:", det.analytic)

print(det.to_json())
