"""
Blocking for a fractional number of circuits
============================================

The loss function extends smoothly to real ``x``. The extension keeps the
integer values and the recursion between neighbours, and it is strictly
convex in ``x``.
"""

import numpy as np

from erlangloss import erlang_b_int, erlang_b_real, phi_real, second_difference

lam = 5.0

# integer points agree with the recursion
for n in range(0, 9, 2):
    print(f"n={n}: real {erlang_b_real(n, lam):.15f}  int {erlang_b_int(n, lam):.15f}")

# between the integers the curve is smooth
xs = np.linspace(0.0, 12.0, 25)
curve = np.array([erlang_b_real(x, lam) for x in xs])
print(np.round(curve, 6))

# neighbours are tied by 1/B(x+1) = 1 + (x+1)/lam / B(x)
x = 3.7
print("recursion residual:",
      1 / erlang_b_real(x + 1, lam) - 1 - (x + 1) / lam / erlang_b_real(x, lam))

# B is convex and phi = 1 - B(x+1) is concave
f = lambda y: erlang_b_real(y, lam)  # noqa: E731
g = lambda y: phi_real(y, lam)  # noqa: E731
print("second difference of B  :", second_difference(f, 4.5, 0.01))
print("second difference of phi:", second_difference(g, 4.5, 0.01))
