"""
Overflow-safe evaluation of the Erlang loss function at integer server counts.

Everything here works with bounded quantities:

* the Poisson CDF ``exp(-lam) * s_n(lam)`` instead of the raw partial sum
  ``s_n(lam) = sum_{j<=n} lam**j / j!``,
* the blocking probability ``B(n, lam)`` through a recursion that stays in
  ``(0, 1]``,
* ``phi(n, lam) = s_n / s_{n+1} = 1 - B(n+1, lam)`` from ``B``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError

__all__ = [
    "check_load",
    "check_servers",
    "scaled_partial_sum",
    "log_scaled_partial_sum",
    "erlang_b_int",
    "erlang_b_sequence",
    "phi",
    "log_phi",
    "log_binomial",
]

# math.comb is exact; above this size fall back on log-gamma
_EXACT_BINOMIAL_LIMIT = 2000


def check_load(load) -> float:
    """Return ``load`` as a float, raising :class:`DomainError` unless it is
    a finite, strictly positive number."""
    try:
        value = float(load)
    except (TypeError, ValueError):
        raise DomainError(f"offered load must be a real number, got {load!r}") from None
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"offered load must be finite and > 0, got {load!r}")
    return value


def check_servers(n, minimum: int = 0) -> int:
    """Return ``n`` as an int, requiring an integral value ``>= minimum``."""
    if isinstance(n, bool):
        raise DomainError(f"server count must be an integer, got {n!r}")
    if isinstance(n, (int, np.integer)):
        value = int(n)
    elif isinstance(n, (float, np.floating)) and float(n).is_integer():
        value = int(n)
    else:
        raise DomainError(f"server count must be an integer, got {n!r}")
    if value < minimum:
        raise DomainError(f"server count must be >= {minimum}, got {value}")
    return value


def _log_poisson_terms(n: int, lam: float) -> np.ndarray:
    j = np.arange(n + 1, dtype=float)
    return -lam + j * math.log(lam) - gammaln(j + 1.0)


def scaled_partial_sum(n: int, load: float) -> float:
    """
    Poisson CDF ``exp(-load) * sum_{j=0}^{n} load**j / j!``.

    The terms are generated in log space and accumulated with
    :func:`math.fsum`, so neither ``load**j`` nor ``j!`` is ever formed.
    Values smaller than the smallest double underflow to ``0.0`` and values
    within half an ulp of one round to ``1.0``; use
    :func:`log_scaled_partial_sum` when the lower tail matters.

    Examples
    --------
    >>> scaled_partial_sum(2, 1.0) * math.e
    2.5
    """
    n = check_servers(n)
    lam = check_load(load)
    terms = np.exp(_log_poisson_terms(n, lam))
    return min(math.fsum(terms), 1.0)


def log_scaled_partial_sum(n: int, load: float) -> float:
    """Natural log of :func:`scaled_partial_sum`, free of underflow."""
    n = check_servers(n)
    lam = check_load(load)
    return min(float(logsumexp(_log_poisson_terms(n, lam))), 0.0)


def erlang_b_sequence(n_max: int, load: float) -> list[float]:
    """Return ``[B(0, load), B(1, load), ..., B(n_max, load)]``.

    Uses ``b_k = lam * b_{k-1} / (k + lam * b_{k-1})`` from ``b_0 = 1``; every
    iterate lies in ``(0, 1]`` so nothing overflows. Deep in the tail the
    values eventually underflow to zero.
    """
    n_max = check_servers(n_max)
    lam = check_load(load)
    out = [1.0]
    b = 1.0
    for k in range(1, n_max + 1):
        lb = lam * b
        b = lb / (k + lb)
        out.append(b)
    return out


def erlang_b_int(n: int, load: float) -> float:
    """
    Erlang's loss function ``B(n, load)`` for an integer number of circuits.

    Parameters
    ----------
    n : int
        Number of circuits, ``n >= 0``.
    load : float
        Offered traffic in erlangs, ``load > 0``.

    Returns
    -------
    float
        Blocking probability in ``(0, 1]``; exactly ``1.0`` when ``n == 0``.

    Examples
    --------
    >>> erlang_b_int(2, 1.0)
    0.2
    """
    n = check_servers(n)
    lam = check_load(load)
    b = 1.0
    for k in range(1, n + 1):
        lb = lam * b
        b = lb / (k + lb)
    return b


def _phi_from_b(n: int, lam: float, b_n: float, b_next: float) -> float:
    # 1 - B(n+1) cancels badly when B(n+1) is close to one; the equivalent
    # ((n+1)/lam) * B(n+1)/B(n) is then exact to rounding.
    if b_next <= 0.5:
        return 1.0 - b_next
    return (n + 1) / lam * (b_next / b_n)


def _log_phi_from_b(n: int, lam: float, b_n: float, b_next: float) -> float:
    if b_next <= 0.5:
        return math.log1p(-b_next)
    return math.log((n + 1) / lam) + math.log(b_next) - math.log(b_n)


def phi(n: int, load: float) -> float:
    """
    Ratio ``s_n(load) / s_{n+1}(load)`` of consecutive partial sums,
    which equals ``1 - B(n+1, load)``.

    ``n = -1`` is accepted and returns ``0.0`` (consistent with
    ``B(0, load) = 1``), which extends the concave sequence one step left.
    """
    n = check_servers(n, minimum=-1)
    lam = check_load(load)
    if n == -1:
        return 0.0
    b_n = erlang_b_int(n, lam)
    b_next = lam * b_n / (n + 1 + lam * b_n)
    return _phi_from_b(n, lam, b_n, b_next)


def log_phi(n: int, load: float) -> float:
    """``log(phi(n, load))`` without the cancellation of ``log(1 - B)``
    when ``B`` is tiny. Returns ``-inf`` at ``n = -1``."""
    n = check_servers(n, minimum=-1)
    lam = check_load(load)
    if n == -1:
        return -math.inf
    b_n = erlang_b_int(n, lam)
    b_next = lam * b_n / (n + 1 + lam * b_n)
    return _log_phi_from_b(n, lam, b_n, b_next)


def log_binomial(a: int, b: int) -> float:
    """Natural log of the binomial coefficient ``C(a, b)``."""
    a = check_servers(a)
    if isinstance(b, bool) or not isinstance(b, (int, np.integer)) or not 0 <= b <= a:
        raise DomainError(f"need 0 <= b <= a, got a={a}, b={b!r}")
    b = int(b)
    if a <= _EXACT_BINOMIAL_LIMIT:
        return math.log(math.comb(a, b))
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)
