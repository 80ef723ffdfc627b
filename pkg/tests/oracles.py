"""Independent reference implementations used only by the tests.

Nothing here calls into ``erlangloss``: partial sums are exact rationals and
the continued loss function comes from the closed form
``1/B(x, lam) = exp(lam) * lam**(-x) * Gamma(x + 1, lam)``.
"""

from fractions import Fraction
from math import factorial

import mpmath

mpmath.mp.dps = 40


def partial_sum(n, lam):
    """Exact ``s_n(lam)`` for rational ``lam``."""
    lam = Fraction(lam)
    return sum(lam**j / factorial(j) for j in range(n + 1))


def blocking(n, lam):
    lam = Fraction(lam)
    return lam**n / factorial(n) / partial_sum(n, lam)


def phi(n, lam):
    if n == -1:
        return Fraction(0)
    return partial_sum(n, lam) / partial_sum(n + 1, lam)


def blocking_real(x, lam):
    x = mpmath.mpf(x)
    lam = mpmath.mpf(lam)
    return 1 / (mpmath.e**lam * lam ** (-x) * mpmath.gammainc(x + 1, lam))


def poisson_cdf(n, lam):
    return mpmath.gammainc(n + 1, mpmath.mpf(lam), mpmath.inf, regularized=True)
