"""
Erlang's loss function for a real number of circuits.

For real ``x >= 0`` the blocking probability is continued through

    1 / B(x, lam) = lam * int_0^inf exp(-lam t) (1 + t)**x dt
                  = int_0^inf exp(-u) (1 + u/lam)**x du,

and satisfies ``1/B(x+1) = 1 + (x+1)/lam * 1/B(x)``. The integral is only
ever evaluated at the fractional part of ``x``; the recursion carries it the
rest of the way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .core import check_load
from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "erlang_b_real",
    "log_inverse_blocking",
    "phi_real",
    "phi_real_complement",
    "second_difference",
]

_HALF_PI = 0.5 * math.pi
_LOG_HALF_PI = math.log(_HALF_PI)
# exp-sinh abscissae u = exp(pi/2 sinh t); outside |t| <= 6.5 every term is
# below 1e-300 relative to the integral for any load a double can represent
_T_MAX = 6.5
_MIN_LEVELS = 3
# switch the upward recursion to log space past this inverse value
_LOG_SWITCH = 1e300


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for :func:`erlang_b_real`.

    Attributes
    ----------
    rel_tol : float
        Stop refining once two successive estimates agree to this relative
        tolerance.
    max_refinements : int
        Maximum number of step-halvings of the quadrature rule.
    reduction_threshold : float
        Arguments at or above this value are reduced to their fractional part
        before integrating.
    """

    rel_tol: float = 1e-12
    max_refinements: int = 30
    reduction_threshold: float = 1.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if int(self.max_refinements) != self.max_refinements or self.max_refinements < 1:
            raise DomainError(f"max_refinements must be an integer >= 1, got {self.max_refinements!r}")
        if not self.reduction_threshold >= 0:
            raise DomainError("reduction_threshold must be >= 0")


DEFAULT_QUADRATURE = QuadratureConfig()


def _log_integrand(t: np.ndarray, x: float, log_lam: float) -> np.ndarray:
    # log of  exp(-u) (1 + u/lam)**x * du/dt  with u = exp(pi/2 sinh t)
    log_u = _HALF_PI * np.sinh(t)
    with np.errstate(over="ignore"):
        u = np.exp(log_u)
    return -u + x * np.logaddexp(0.0, log_u - log_lam) + _LOG_HALF_PI + np.log(np.cosh(t)) + log_u


@lru_cache(maxsize=4096)
def _integral(x: float, lam: float, rel_tol: float, max_refinements: int) -> float:
    """``int_0^inf exp(-u) (1 + u/lam)**x du`` by exp-sinh quadrature with
    step halving."""
    log_lam = math.log(lam)
    h = 0.5
    t = np.arange(-_T_MAX, _T_MAX + 0.5 * h, h)
    total = float(np.exp(_log_integrand(t, x, log_lam)).sum())
    estimate = h * total
    for level in range(1, max_refinements + 1):
        h *= 0.5
        # only the new midpoints; the old nodes are already summed
        t = np.arange(-_T_MAX + h, _T_MAX, 2.0 * h)
        total += float(np.exp(_log_integrand(t, x, log_lam)).sum())
        previous, estimate = estimate, h * total
        if level >= _MIN_LEVELS and abs(estimate - previous) <= rel_tol * abs(estimate):
            return estimate
    raise ConvergenceError(
        f"quadrature for x={x!r}, load={lam!r} did not reach rel_tol={rel_tol} "
        f"in {max_refinements} refinements",
        bracket=(previous, estimate),
    )


def _check_real_servers(x, minimum: float = 0.0) -> float:
    try:
        value = float(x)
    except (TypeError, ValueError):
        raise DomainError(f"server count must be a real number, got {x!r}") from None
    if not math.isfinite(value) or value < minimum:
        raise DomainError(f"server count must be finite and >= {minimum}, got {x!r}")
    return value


def _log_inverse(x: float, lam: float, cfg: QuadratureConfig) -> float:
    # valid for x > -1, where the integral still converges
    if x == 0.0:
        return 0.0
    if x >= cfg.reduction_threshold:
        steps = math.floor(x)
        base = x - steps
    else:
        steps = 0
        base = x
    if base == 0.0:
        inv = 1.0
    else:
        inv = _integral(base, lam, cfg.rel_tol, int(cfg.max_refinements))

    y = base
    log_inv = None
    for _ in range(steps):
        y += 1.0
        if log_inv is None:
            inv = 1.0 + y / lam * inv
            if inv > _LOG_SWITCH:
                log_inv = math.log(inv)
        else:
            grow = math.log(y / lam) + log_inv
            log_inv = grow + math.log1p(math.exp(-grow))
    return math.log(inv) if log_inv is None else log_inv


def log_inverse_blocking(x: float, load: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``-log B(x, load)`` for real ``x >= 0``.

    Stays finite where ``B`` itself underflows (``x`` much larger than
    ``load``).
    """
    return _log_inverse(_check_real_servers(x), check_load(load), cfg)


def erlang_b_real(x: float, load: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    Continued Erlang loss function ``B(x, load)`` for real ``x >= 0``.

    Parameters
    ----------
    x : float
        Real number of circuits, ``x >= 0``.
    load : float
        Offered traffic in erlangs.
    cfg : QuadratureConfig, optional
        Quadrature tolerances.

    Returns
    -------
    float
        Blocking probability in ``(0, 1]``. May underflow to ``0.0`` for
        ``x`` far beyond ``load``; see :func:`log_inverse_blocking`.

    Raises
    ------
    DomainError
        For negative or non-finite ``x`` or an invalid load.
    ConvergenceError
        When the quadrature does not settle within ``cfg.max_refinements``.
    """
    return math.exp(-log_inverse_blocking(x, load, cfg))


def phi_real(x: float, load: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Continued ratio ``phi(x, load) = 1 - B(x + 1, load)`` for ``x >= -1``.

    Exactly ``0.0`` at ``x = -1``.
    """
    x = _check_real_servers(x, minimum=-1.0)
    lam = check_load(load)
    if x == -1.0:
        return 0.0
    log_inv_next = _log_inverse(x + 1.0, lam, cfg)
    if log_inv_next >= math.log(2.0):
        return -math.expm1(-log_inv_next)
    # B(x+1) > 1/2: use (x+1)/lam * B(x+1)/B(x), free of cancellation
    return (x + 1.0) / lam * math.exp(_log_inverse(x, lam, cfg) - log_inv_next)


def phi_real_complement(x: float, load: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``1 - phi_real(x, load)``, i.e. ``B(x + 1, load)``, without rounding
    ``phi`` to one first."""
    x = _check_real_servers(x, minimum=-1.0)
    return erlang_b_real(x + 1.0, load, cfg)


def second_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Return ``f(x + h) - 2 f(x) + f(x - h)``."""
    if not h > 0:
        raise DomainError(f"step must be positive, got {h!r}")
    return f(x + h) - 2.0 * f(x) + f(x - h)
