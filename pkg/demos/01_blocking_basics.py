"""
Blocking probability of a loss system
=====================================

A trunk group of ``n`` circuits offered ``lam`` erlangs loses a fraction
``B(n, lam)`` of its calls. The forward recursion stays in ``(0, 1]``, so it
is safe far beyond the point where factorial-based formulas overflow.
"""

import numpy as np

from erlangloss import erlang_b_int, erlang_b_sequence, phi, scaled_partial_sum

# a single circuit offered one erlang blocks half of the calls
print("B(1, 1) =", erlang_b_int(1, 1.0))

# the whole sequence B(0..n) comes out of one pass
seq = erlang_b_sequence(20, 10.0)
for n in (0, 5, 10, 15, 20):
    print(f"B({n:2d}, 10) = {seq[n]:.6e}")

# phi(n) = 1 - B(n+1) is the Poisson CDF ratio P(N <= n) / P(N <= n+1)
print("phi(9, 10) =", phi(9, 10.0))
print("check:", scaled_partial_sum(9, 10.0) / scaled_partial_sum(10, 10.0))

# huge arguments: 1000 circuits at 950 erlangs, and a Poisson CDF at 1e5
print("B(1000, 950) =", erlang_b_int(1000, 950.0))
print("P(Poisson(1e5) <= 1e5) =", scaled_partial_sum(100_000, 100_000.0))

# blocking falls monotonically as circuits are added
assert np.all(np.diff(seq) < 0)
