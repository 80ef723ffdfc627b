"""
Numerical checks of the inequalities satisfied by the partial sums
``s_n(lam)`` of the exponential series and by Erlang's loss function.

Every checker returns a :class:`CheckReport` with the inequality oriented
as ``lhs < rhs``. The two sides are evaluated in a form that is
algebraically equivalent to the textbook statement but free of catastrophic
cancellation, so that margins far below ``1e-16`` stay resolvable:

==================  ===========================================================
check               evaluated as
==================  ===========================================================
``ineq_1_2``        ``2 rho(n+1) < 1 + rho(n+1) rho(n+2)``, which is
                    ``phi(n) + phi(n+2) < 2 phi(n+1)`` rewritten with
                    ``phi = 1 - B`` and divided by ``B(n+1)``
``ineq_1_3_left``   ``log[(n-l)!/n! * s_{n-l}/s_n]
                    < log[(n-m)!/(n-m+l)! * s_{n-m}/s_{n-m+l}]``
``ineq_1_3_right``  ``log(s_{n-m}/s_{n-m+l}) < log(s_{n-l}/s_n)``
``ineq_3_2``        ``B(n+r+1) < (m-r)/m B(n+1) + r/m B(n+m+1)``,
                    divided by ``B(n+1)``
``ineq_3_3``        ``phi(m)/(m+1) < phi(r)/(r+1)``
``corollary``       ``n/(n+1) < s_{n-1} s_{n+1} / s_n**2 = phi(n-1)/phi(n)``
``monotone_B``      ``log B(n+1) < log B(n)``
``monotone_phi``    ``log phi(n) < log phi(n+1)``
``convex_B``        ``noise < B(x+h) - 2 B(x) + B(x-h)``
``concave_phi``     ``noise < -(phi(x+h) - 2 phi(x) + phi(x-h))``
==================  ===========================================================

Here ``rho(k) = B(k+1)/B(k) = lam phi(k)/(k+1)``, which stays representable
after ``B`` itself has underflowed. Log-ratios of partial sums are sums of
``log phi(k)``, each computed as ``log1p(-B(k+1))`` when ``B`` is small; that
needs ``B(n_max + 2)`` to be a normal double, which :class:`SweepGrid`
enforces through :func:`stability_limit`.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from . import core
from .continuation import DEFAULT_QUADRATURE, QuadratureConfig, erlang_b_real, second_difference
from .errors import DomainError

__all__ = [
    "CheckReport",
    "SweepGrid",
    "DEFAULT_LOADS",
    "slack",
    "stability_limit",
    "check_ineq_1_2",
    "check_ineq_1_3",
    "check_ineq_3_2",
    "check_ineq_3_3",
    "check_corollary",
    "check_monotonicity",
    "check_convexity",
    "run_sweep",
    "REPORT_FIELDS",
    "reports_to_csv",
    "reports_to_jsonl",
    "summarize",
]

REL_SLACK = 1e-12
ABS_SLACK = 1e-300
NOISE_FACTOR = 10.0

DEFAULT_LOADS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)
DEFAULT_X_GRID = tuple(0.5 * k for k in range(1, 41))

# smallest B the log-phi terms may rely on
_B_FLOOR = 1e-290

REPORT_FIELDS = ("name", "n", "m", "l", "r", "lambda", "lhs", "rhs", "margin", "passed")


def slack(lhs: float, rhs: float) -> float:
    """Noise allowance a margin has to beat for a strict inequality to count."""
    return REL_SLACK * max(abs(lhs), abs(rhs)) + ABS_SLACK


@lru_cache(maxsize=256)
def stability_limit(load: float) -> int:
    """Largest ``n`` with ``B(n, load)`` above ``1e-290``."""
    lam = core.check_load(load)
    log_floor = math.log(_B_FLOOR)
    log_b = 0.0
    n = 0
    while True:
        # log B(n+1) - log B(n) = log(lam / (n + 1 + lam B(n)))
        step = math.log(lam) - math.log(n + 1 + lam * math.exp(log_b))
        if log_b + step <= log_floor:
            return n
        log_b += step
        n += 1


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality check, oriented as ``lhs < rhs``.

    ``n`` holds the real abscissa ``x`` for the convexity checks.
    ``error`` is set (and ``passed`` is false) when evaluation raised.
    """

    name: str
    load: float
    lhs: float
    rhs: float
    n: Optional[float] = None
    m: Optional[int] = None
    l: Optional[int] = None  # noqa: E741
    r: Optional[int] = None
    margin: float = field(init=False)
    passed: bool = field(init=False)
    error: Optional[str] = None

    def __post_init__(self):
        margin = self.rhs - self.lhs
        object.__setattr__(self, "margin", margin)
        ok = self.error is None and margin > slack(self.lhs, self.rhs)
        object.__setattr__(self, "passed", bool(ok))

    @property
    def params(self) -> tuple:
        return (self.n, self.m, self.l, self.r, self.load)

    def as_row(self) -> dict:
        row = asdict(self)
        row["lambda"] = row.pop("load")
        row.pop("error")
        return {key: row[key] for key in REPORT_FIELDS}


@dataclass(frozen=True)
class SweepGrid:
    """Parameter grid for :func:`run_sweep`.

    Attributes
    ----------
    n_range : range
        Values of ``n`` for the integer checks.
    load_grid : tuple of float
        Offered loads.
    index_limit : int
        Upper bound on the auxiliary indices ``m``, ``l`` and ``r``.
    x_grid : tuple of float
        Real abscissae for the convexity probes; empty to skip them.
    h : float
        Step of the convexity probes.
    """

    n_range: range = range(0, 101)
    load_grid: tuple = DEFAULT_LOADS
    index_limit: int = 30
    x_grid: tuple = DEFAULT_X_GRID
    h: float = 0.01
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE

    def __post_init__(self):
        if not isinstance(self.n_range, range) or self.n_range.step != 1:
            raise DomainError("n_range must be a contiguous range")
        if len(self.n_range) and self.n_range.start < 0:
            raise DomainError("n_range must start at 0 or above")
        if self.index_limit < 1:
            raise DomainError("index_limit must be >= 1")
        object.__setattr__(self, "load_grid", tuple(core.check_load(v) for v in self.load_grid))
        if len(self.n_range):
            for lam in self.load_grid:
                if self.n_range[-1] + 2 > stability_limit(lam):
                    raise DomainError(
                        f"n_range up to {self.n_range[-1]} exceeds the stability limit "
                        f"{stability_limit(lam) - 2} at load {lam}"
                    )
        object.__setattr__(self, "x_grid", tuple(float(x) for x in self.x_grid))
        if not self.h > 0:
            raise DomainError("h must be positive")


class _Table:
    """phi, log phi, log rho and log B at one load for k = 0..size-1."""

    def __init__(self, lam: float, size: int):
        self.lam = lam
        b = core.erlang_b_sequence(size, lam)
        log_lam = math.log(lam)
        self.phi = []
        self.log_phi = []
        self.log_rho = []
        self.log_b = [0.0]
        for k in range(size):
            self.phi.append(core._phi_from_b(k, lam, b[k], b[k + 1]))
            lp = core._log_phi_from_b(k, lam, b[k], b[k + 1])
            self.log_phi.append(lp)
            self.log_rho.append(log_lam + lp - math.log(k + 1))
            self.log_b.append(self.log_b[-1] + self.log_rho[-1])

    def rho_product(self, a: int, b: int) -> float:
        """``B(b)/B(a)`` for ``a <= b``."""
        return math.exp(math.fsum(self.log_rho[a:b]))

    def log_ratio(self, a: int, b: int) -> float:
        """``log(s_a / s_b)`` for ``a <= b``, summed smallest terms first."""
        return math.fsum(reversed(self.log_phi[a:b]))


@lru_cache(maxsize=64)
def _cached_table(lam: float, size: int) -> _Table:
    return _Table(lam, size)


def _table(lam: float, needed: int) -> _Table:
    size = 64
    while size <= needed:
        size *= 2
    return _cached_table(lam, size)


def _index(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_ineq_1_2(n: int, load: float) -> CheckReport:
    """Three-term ratio inequality
    ``s_n/s_{n+1} + s_{n+2}/s_{n+3} < 2 s_{n+1}/s_{n+2}``."""
    n = _index(n, "n", 0)
    lam = core.check_load(load)
    t = _table(lam, n + 3)
    rho1 = t.rho_product(n + 1, n + 2)
    rho12 = t.rho_product(n + 1, n + 3)
    return CheckReport("ineq_1_2", lam, lhs=2.0 * rho1, rhs=1.0 + rho12, n=n)


def check_ineq_1_3(n: int, m: int, l: int, load: float) -> tuple[CheckReport, CheckReport]:  # noqa: E741
    """
    Two-sided product inequality, for ``n >= m > l >= 1``::

        C(n-m+l, l)/C(n, l) s_{n-l} s_{n-m+l} < s_n s_{n-m} < s_{n-l} s_{n-m+l}

    Returns the reports for the left and the right inequality.
    """
    n = _index(n, "n", 1)
    m = _index(m, "m", 1)
    l = _index(l, "l", 1)  # noqa: E741
    if not n >= m > l:
        raise DomainError(f"need n >= m > l >= 1, got n={n}, m={m}, l={l}")
    lam = core.check_load(load)
    t = _table(lam, n)
    log_front = t.log_ratio(n - l, n)  # log(s_{n-l}/s_n)
    log_back = t.log_ratio(n - m, n - m + l)  # log(s_{n-m}/s_{n-m+l})
    binom = core.log_binomial(n - m + l, l) - core.log_binomial(n, l)
    left = CheckReport("ineq_1_3_left", lam, lhs=binom + log_front, rhs=log_back, n=n, m=m, l=l)
    right = CheckReport("ineq_1_3_right", lam, lhs=log_back, rhs=log_front, n=n, m=m, l=l)
    return left, right


def check_ineq_3_2(n: int, m: int, r: int, load: float) -> CheckReport:
    """Chord inequality for the concave ``phi``::

        (m-r)/m phi(n) + r/m phi(n+m) < phi(n+r),   1 <= r < m,  n >= -1

    with ``phi(-1) = 0``.
    """
    n = _index(n, "n", -1)
    m = _index(m, "m", 2)
    r = _index(r, "r", 1)
    if not 1 <= r < m:
        raise DomainError(f"need 1 <= r < m, got m={m}, r={r}")
    lam = core.check_load(load)
    t = _table(lam, n + m + 1)
    # phi(k) = 1 - B(k+1): the constant parts cancel exactly, then divide by B(n+1)
    lhs = t.rho_product(n + 1, n + r + 1)
    rhs = (m - r) / m + r / m * t.rho_product(n + 1, n + m + 1)
    return CheckReport("ineq_3_2", lam, lhs=lhs, rhs=rhs, n=n, m=m, r=r)


def check_ineq_3_3(m: int, r: int, load: float) -> CheckReport:
    """``phi(m)/(m+1) < phi(r)/(r+1)`` for ``0 <= r < m``."""
    m = _index(m, "m", 1)
    r = _index(r, "r", 0)
    if not r < m:
        raise DomainError(f"need 0 <= r < m, got m={m}, r={r}")
    lam = core.check_load(load)
    t = _table(lam, m + 1)
    return CheckReport("ineq_3_3", lam, lhs=t.phi[m] / (m + 1), rhs=t.phi[r] / (r + 1), m=m, r=r)


def check_corollary(n: int, load: float) -> CheckReport:
    """``s_{n-1} s_{n+1} > n/(n+1) s_n**2`` for ``n >= 1``, divided through
    by ``s_n**2``."""
    n = _index(n, "n", 1)
    lam = core.check_load(load)
    t = _table(lam, n + 1)
    return CheckReport("corollary", lam, lhs=n / (n + 1), rhs=t.phi[n - 1] / t.phi[n], n=n)


def _monotone_reports(t: _Table, ns: Iterable[int]) -> list[CheckReport]:
    out = []
    for n in ns:
        out.append(CheckReport("monotone_B", t.lam, lhs=t.log_b[n + 1], rhs=t.log_b[n], n=n))
        out.append(CheckReport("monotone_phi", t.lam, lhs=t.log_phi[n], rhs=t.log_phi[n + 1], n=n))
    return out


def check_monotonicity(grid: SweepGrid) -> list[CheckReport]:
    """Strict decrease of ``B(n)`` and strict increase of ``phi(n)`` between
    consecutive ``n`` of the grid, for each load."""
    ns = list(grid.n_range)[:-1]
    out = []
    for lam in grid.load_grid:
        if not ns:
            continue
        out.extend(_monotone_reports(_table(lam, ns[-1] + 2), ns))
    return out


def check_convexity(xs: Iterable[float], load: float, h: float = 0.01,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> list[CheckReport]:
    """
    Probe strict convexity of ``B(x)`` and strict concavity of ``phi(x)`` by
    second differences of step ``h``.

    The left side of each report is the noise floor ``10 * rel_tol * max|f|``
    (``f = B`` for ``phi`` too, since ``phi = 1 - B(x+1)`` and the constant
    carries no quadrature error). The ``phi`` difference is taken on
    ``B(x+1)`` and negated, which avoids rounding ``phi`` to one.
    """
    lam = core.check_load(load)
    if not h > 0:
        raise DomainError(f"h must be positive, got {h!r}")

    def blocking(y):
        return erlang_b_real(y, lam, cfg)

    def shifted(y):
        return erlang_b_real(y + 1.0, lam, cfg)

    out = []
    for x in xs:
        x = float(x)
        for name, f, lower in (("convex_B", blocking, 0.0), ("concave_phi", shifted, -1.0)):
            if x - h < lower:
                raise DomainError(f"{name}: x - h = {x - h} is below {lower}")
            values = [f(x - h), f(x), f(x + h)]
            noise = NOISE_FACTOR * cfg.rel_tol * max(values)
            out.append(CheckReport(name, lam, lhs=noise, rhs=second_difference(f, x, h), n=x))
    return out


def _failed(name, lam, exc, **params) -> CheckReport:
    nan = math.nan
    return CheckReport(name, lam, lhs=nan, rhs=nan, error=f"{type(exc).__name__}: {exc}", **params)


def run_sweep(grid: SweepGrid = SweepGrid()) -> list[CheckReport]:
    """
    Run every checker over ``grid``.

    Reports come out grouped by check, then by load in grid order, then
    lexicographically in ``(n, m, l, r)``. A checker that raises produces a
    failed report carrying the error text instead of aborting the sweep.
    """
    ns = list(grid.n_range)
    n_max = ns[-1] if ns else -1
    lim = grid.index_limit
    sections = {key: [] for key in (
        "ineq_1_2", "ineq_1_3", "ineq_3_2", "ineq_3_3", "corollary", "monotone", "convexity")}

    for lam in grid.load_grid:
        for n in ns:
            try:
                sections["ineq_1_2"].append(check_ineq_1_2(n, lam))
            except Exception as exc:  # noqa: BLE001
                sections["ineq_1_2"].append(_failed("ineq_1_2", lam, exc, n=n))
        for n in ns:
            for m in range(2, min(n, lim) + 1):
                for l in range(1, m):  # noqa: E741
                    try:
                        sections["ineq_1_3"].extend(check_ineq_1_3(n, m, l, lam))
                    except Exception as exc:  # noqa: BLE001
                        sections["ineq_1_3"].append(_failed("ineq_1_3", lam, exc, n=n, m=m, l=l))
        # the chord inequality also holds from the extended point n = -1
        for n in ([-1] + ns if ns else []):
            for m in range(2, lim + 1):
                for r in range(1, m):
                    try:
                        sections["ineq_3_2"].append(check_ineq_3_2(n, m, r, lam))
                    except Exception as exc:  # noqa: BLE001
                        sections["ineq_3_2"].append(_failed("ineq_3_2", lam, exc, n=n, m=m, r=r))
        for m in range(1, min(n_max, lim) + 1):
            for r in range(0, m):
                try:
                    sections["ineq_3_3"].append(check_ineq_3_3(m, r, lam))
                except Exception as exc:  # noqa: BLE001
                    sections["ineq_3_3"].append(_failed("ineq_3_3", lam, exc, m=m, r=r))
        for n in ns:
            if n < 1:
                continue
            try:
                sections["corollary"].append(check_corollary(n, lam))
            except Exception as exc:  # noqa: BLE001
                sections["corollary"].append(_failed("corollary", lam, exc, n=n))
        if len(ns) > 1:
            try:
                sections["monotone"].extend(_monotone_reports(_table(lam, n_max + 1), ns[:-1]))
            except Exception as exc:  # noqa: BLE001
                sections["monotone"].append(_failed("monotone", lam, exc))
        for x in grid.x_grid:
            try:
                sections["convexity"].extend(check_convexity([x], lam, grid.h, grid.quadrature))
            except Exception as exc:  # noqa: BLE001
                sections["convexity"].append(_failed("convexity", lam, exc, n=x))

    return [report for section in sections.values() for report in section]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def reports_to_csv(reports: Iterable[CheckReport], header: bool = True) -> str:
    """Serialize reports as CSV with the columns of :data:`REPORT_FIELDS`."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(REPORT_FIELDS)
    for report in reports:
        row = report.as_row()
        writer.writerow([_fmt(row[key]) for key in REPORT_FIELDS])
    return buf.getvalue()


def _json_number(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def reports_to_jsonl(reports: Iterable[CheckReport]) -> str:
    """Serialize reports as JSON lines, one object per report."""
    lines = []
    for report in reports:
        row = {key: _json_number(val) for key, val in report.as_row().items()}
        lines.append(json.dumps(row, allow_nan=False))
    return "".join(line + "\n" for line in lines)


def summarize(reports: list[CheckReport]) -> dict:
    """Counts of passed and failed reports and the smallest relative margin."""
    failed = sum(not rep.passed for rep in reports)
    rel = [rep.margin / max(abs(rep.lhs), abs(rep.rhs)) for rep in reports
           if rep.error is None and max(abs(rep.lhs), abs(rep.rhs)) > 0]
    return {
        "total": len(reports),
        "passed": len(reports) - failed,
        "failed": failed,
        "min_margin": min((rep.margin for rep in reports), default=None),
        "min_relative_margin": min(rel, default=None),
    }
