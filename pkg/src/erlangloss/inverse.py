"""
Dimensioning: invert the Erlang loss function in either argument.

All solvers bracket first and then bisect. ``B`` decreases strictly in the
number of circuits, so the server-count inverses are unique. The traffic
inverse additionally relies on ``B(n, lam)`` increasing in ``lam``; the test
suite checks that on the default load grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .continuation import DEFAULT_QUADRATURE, QuadratureConfig, erlang_b_real
from .core import check_load, check_servers, erlang_b_int
from .errors import ConvergenceError, DomainError

__all__ = ["SolveOptions", "min_servers", "solve_servers_real", "solve_traffic"]


@dataclass(frozen=True)
class SolveOptions:
    x_tol: float = 1e-9
    max_iter: int = 200
    bracket_growth: float = 2.0

    def __post_init__(self):
        if not self.x_tol > 0:
            raise DomainError(f"x_tol must be positive, got {self.x_tol!r}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if not self.bracket_growth > 1:
            raise DomainError(f"bracket_growth must exceed 1, got {self.bracket_growth!r}")


DEFAULT_OPTIONS = SolveOptions()

# cap on the per-step widening factor of solve_traffic
_MAX_STEP = 1e16


def _check_target(target, allow_one: bool = True) -> float:
    try:
        value = float(target)
    except (TypeError, ValueError):
        raise DomainError(f"blocking target must be a real number, got {target!r}") from None
    upper_ok = value <= 1.0 if allow_one else value < 1.0
    if not (value > 0.0 and upper_ok):
        bound = "(0, 1]" if allow_one else "(0, 1)"
        raise DomainError(f"blocking target must lie in {bound}, got {target!r}")
    return value


def min_servers(load: float, target: float, opts: SolveOptions = DEFAULT_OPTIONS) -> int:
    """
    Smallest number of circuits ``n`` with ``B(n, load) <= target``.

    Doubles an upper bound until it qualifies, then binary-searches the
    monotone sequence.

    Examples
    --------
    >>> min_servers(1.0, 0.2)
    2
    """
    lam = check_load(load)
    target = _check_target(target)
    if target >= 1.0:
        return 0
    lo, hi = 0, 1  # invariant: B(lo) > target
    iterations = 0
    while erlang_b_int(hi, lam) > target:
        lo, hi = hi, max(hi + 1, int(math.ceil(hi * opts.bracket_growth)))
        iterations += 1
        if iterations > opts.max_iter:
            raise ConvergenceError(f"no server count up to {lo} meets target {target}", bracket=(lo, hi))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if erlang_b_int(mid, lam) > target:
            lo = mid
        else:
            hi = mid
    return hi


def _arithmetic_mid(lo, hi):
    return 0.5 * (lo + hi)


def _geometric_mid(lo, hi):
    return math.sqrt(lo) * math.sqrt(hi)


def _bisect(f, lo: float, hi: float, done, opts: SolveOptions, midpoint=_arithmetic_mid) -> float:
    # f(lo) > 0 >= f(hi)
    for _ in range(opts.max_iter):
        if done(lo, hi):
            return midpoint(lo, hi)
        mid = midpoint(lo, hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection did not converge in {opts.max_iter} steps", bracket=(lo, hi))


def solve_servers_real(load: float, target: float, opts: SolveOptions = DEFAULT_OPTIONS,
                       cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    Real ``x >= 0`` with ``B(x, load) = target``, to within ``opts.x_tol``.

    The root lies between ``n - 1`` and ``n = min_servers(load, target)``;
    that bracket is bisected on the continued loss function.
    """
    lam = check_load(load)
    target = _check_target(target)
    if target >= 1.0:
        return 0.0
    n = min_servers(lam, target, opts)
    if erlang_b_int(n, lam) == target:
        return float(n)
    return _bisect(
        lambda x: erlang_b_real(x, lam, cfg) - target,
        float(n - 1), float(n),
        lambda a, b: b - a <= opts.x_tol,
        opts,
    )


def solve_traffic(n: int, target: float, opts: SolveOptions = DEFAULT_OPTIONS) -> float:
    """
    Offered load ``lam`` at which ``n`` circuits block with probability
    ``target``, to relative tolerance ``opts.x_tol``.

    The search starts from ``target * n / (1 - target)``, which is exact for
    a single circuit. The bracket is widened by ``opts.bracket_growth``, a
    factor that squares on every further step so that targets many decades
    away from the seed are still reached quickly. Bisection is geometric.

    Examples
    --------
    >>> round(solve_traffic(1, 0.9), 6)
    9.0
    """
    n = check_servers(n, minimum=1)
    target = _check_target(target, allow_one=False)
    growth = opts.bracket_growth
    seed = target * n / (1.0 - target)

    def excess(lam):
        return target - erlang_b_int(n, lam)

    lo, hi = seed / growth, seed
    factor = growth
    for _ in range(opts.max_iter):
        if excess(lo) > 0:
            break
        lo, hi = lo / factor, lo
        factor = min(factor * factor, _MAX_STEP)
    else:
        raise ConvergenceError("could not bracket the load from below", bracket=(lo, hi))
    factor = growth
    for _ in range(opts.max_iter):
        if excess(hi) <= 0:
            break
        lo, hi = hi, hi * factor
        factor = min(factor * factor, _MAX_STEP)
    else:
        raise ConvergenceError("could not bracket the load from above", bracket=(lo, hi))
    return _bisect(excess, lo, hi, lambda a, b: b - a <= opts.x_tol * a, opts, _geometric_mid)
