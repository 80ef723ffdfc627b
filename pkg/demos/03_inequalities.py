"""
Checking the inequalities numerically
=====================================

Each check returns a report whose ``margin`` is ``rhs - lhs`` in a form
chosen to avoid cancellation. A full sweep covers a million instances.
"""

from erlangloss import SweepGrid, check_corollary, check_ineq_1_2, check_ineq_3_2, run_sweep
from erlangloss.properties import summarize

print(check_ineq_1_2(3, 2.0))
print(check_corollary(10, 10.0))

# the chord inequality also holds from the extended point n = -1
print(check_ineq_3_2(-1, 2, 1, 1.0))

# a small sweep; the default grid runs in a few seconds
grid = SweepGrid(n_range=range(0, 41), load_grid=(0.5, 5.0, 50.0), index_limit=10)
reports = run_sweep(grid)
print(summarize(reports))

# the tightest instances
for r in sorted(reports, key=lambda r: r.margin / max(abs(r.rhs), 1e-300))[:5]:
    print(r.name, r.params, r.load, r.margin)
