"""
Monte Carlo oracle: an ``n``-circuit loss system fed by Poisson arrivals.

Calls that find every circuit busy are cleared. The run starts empty with no
warm-up discard; the resulting bias is of order ``n / arrivals``.

Random numbers come from NumPy's Philox-4x64-10 counter-based generator
seeded with the 64-bit ``seed``. Interarrival times are drawn first, then
service times, each as one block of ``arrivals`` variates, so a given seed
reproduces the same sample path on any platform NumPy supports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numba
import numpy as np

from .core import check_load, check_servers, erlang_b_int
from .errors import DomainError

__all__ = ["SimConfig", "SimResult", "simulate", "GENERATOR"]

GENERATOR = "numpy.random.Philox (4x64-10)"
_SERVICES = ("exponential", "deterministic")


@dataclass(frozen=True)
class SimConfig:
    """One simulation run.

    ``service`` is ``"exponential"`` (unit mean) or ``"deterministic"``
    (every call holds for exactly one time unit).
    """

    servers: int
    load: float
    arrivals: int = 1_000_000
    seed: int = 0
    service: str = "exponential"
    batches: int = 50

    def __post_init__(self):
        object.__setattr__(self, "servers", check_servers(self.servers))
        object.__setattr__(self, "load", check_load(self.load))
        if isinstance(self.arrivals, bool) or int(self.arrivals) != self.arrivals or self.arrivals < 1:
            raise DomainError(f"arrivals must be a positive integer, got {self.arrivals!r}")
        object.__setattr__(self, "arrivals", int(self.arrivals))
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))
        if self.service not in _SERVICES:
            raise DomainError(f"service must be one of {_SERVICES}, got {self.service!r}")
        if self.batches < 2:
            raise DomainError("batches must be >= 2")


@dataclass(frozen=True)
class SimResult:
    """Outcome of :func:`simulate`.

    ``std_error`` is the binomial standard error ``sqrt(p (1 - p) / offered)``.
    It ignores the positive correlation between successive blocking events,
    so it understates the true spread, especially when many calls overlap.
    ``batch_std_error`` is a batch-means estimate that accounts for it
    (``nan`` when there are fewer arrivals than batches).
    """

    config: SimConfig
    offered: int
    blocked: int
    batch_std_error: float
    generator: str = GENERATOR

    @property
    def estimate(self) -> float:
        return self.blocked / self.offered

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.offered)

    @property
    def analytic(self) -> float:
        return erlang_b_int(self.config.servers, self.config.load)

    @property
    def z_score(self) -> float:
        diff = self.estimate - self.analytic
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error

    def to_dict(self) -> dict:
        z = self.z_score
        return {
            "servers": self.config.servers,
            "lambda": self.config.load,
            "arrivals": self.offered,
            "seed": self.config.seed,
            "blocked": self.blocked,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "analytic": self.analytic,
            "z_score": z if math.isfinite(z) else None,
            "batch_std_error": self.batch_std_error if math.isfinite(self.batch_std_error) else None,
            "service": self.config.service,
            "generator": self.generator,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)


@numba.njit(cache=True)
def _run(interarrivals, services, servers, flags):
    # free_at[k]: time circuit k becomes idle; a call is lost iff all are busy
    free_at = np.zeros(servers)
    t = 0.0
    blocked = 0
    for i in range(interarrivals.shape[0]):
        t += interarrivals[i]
        if servers == 0:
            flags[i] = 1
            blocked += 1
            continue
        k = 0
        earliest = free_at[0]
        for j in range(1, servers):
            if free_at[j] < earliest:
                earliest = free_at[j]
                k = j
        if earliest > t:
            flags[i] = 1
            blocked += 1
        else:
            free_at[k] = t + services[i]
    return blocked


def _batch_std_error(flags: np.ndarray, batches: int) -> float:
    size = flags.shape[0] // batches
    if size == 0:
        return math.nan
    means = flags[: size * batches].reshape(batches, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))


def simulate(cfg: SimConfig) -> SimResult:
    """
    Simulate ``cfg.arrivals`` offered calls and count the blocked ones.

    Deterministic in ``cfg``: the same configuration gives the same result
    bit for bit.
    """
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    interarrivals = rng.exponential(1.0 / cfg.load, cfg.arrivals)
    if cfg.service == "exponential":
        services = rng.exponential(1.0, cfg.arrivals)
    else:
        services = np.ones(cfg.arrivals)
    flags = np.zeros(cfg.arrivals, dtype=np.int8)
    blocked = int(_run(interarrivals, services, cfg.servers, flags))
    return SimResult(
        config=cfg,
        offered=cfg.arrivals,
        blocked=blocked,
        batch_std_error=_batch_std_error(flags.astype(float), cfg.batches),
    )
