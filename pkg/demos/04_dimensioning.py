"""
Dimensioning a trunk group
==========================

Three inverse questions: how many circuits for a grade of service, what
fractional capacity hits it exactly, and how much traffic a fixed group
carries at that grade.
"""

from erlangloss import erlang_b_int, erlang_b_real, min_servers, solve_servers_real, solve_traffic

target = 0.01

for lam in (1.0, 10.0, 100.0):
    n = min_servers(lam, target)
    x = solve_servers_real(lam, target)
    print(f"{lam:6.1f} erlangs: {n} circuits (B = {erlang_b_int(n, lam):.4%}), "
          f"exact crossing at x = {x:.6f} (B = {erlang_b_real(x, lam):.6%})")

# capacity of fixed groups at 1% blocking
for n in (1, 5, 10, 50):
    lam = solve_traffic(n, target)
    print(f"{n:3d} circuits carry {lam:.6f} erlangs at 1% blocking")

# utilisation improves with size: the trunking gain
for n in (5, 50):
    lam = solve_traffic(n, target)
    print(f"{n} circuits: occupancy {lam * (1 - target) / n:.1%}")
