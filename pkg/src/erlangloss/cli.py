"""Command-line interface: ``erlangloss {blocking,inverse,verify,table,simulate}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import secrets
import sys

from . import core, properties
from .continuation import QuadratureConfig, erlang_b_real
from .errors import ConvergenceError, DomainError
from .inverse import SolveOptions, min_servers, solve_servers_real, solve_traffic
from .simulator import SimConfig, simulate

_INT_RE = re.compile(r"^\s*\+?\d+\s*$")


def fmt(value) -> str:
    """Locale-independent decimal with 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(value, ".17g")


def _loads(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    try:
        return tuple(core.check_load(float(p)) for p in parts)
    except ValueError as exc:
        raise DomainError(f"bad load list {text!r}: {exc}") from None


def _n_range(text: str) -> range:
    match = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not match:
        raise DomainError(f"expected a range like 0..100, got {text!r}")
    lo, hi = int(match.group(1)), int(match.group(2))
    if hi < lo:
        raise DomainError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _emit_rows(out, header, rows, kind):
    if kind == "json":
        for row in rows:
            out.write(json.dumps(dict(zip(header, row)), allow_nan=False) + "\n")
    elif kind == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[fmt(v) for v in row] for row in rows])
    else:
        for row in rows:
            out.write(" ".join(fmt(v) for v in row) + "\n")


def _quadrature(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol)


def cmd_blocking(args, out) -> int:
    text = args.servers
    method = args.method or ("int" if _INT_RE.match(text) else "real")
    try:
        x = float(text)
    except ValueError:
        raise DomainError(f"server count must be a number, got {text!r}") from None
    if method == "int":
        value = core.erlang_b_int(core.check_servers(x), args.load)
    else:
        value = erlang_b_real(x, args.load, _quadrature(args))
    if args.format == "plain":
        out.write(fmt(value) + "\n")
    else:
        _emit_rows(out, ("servers", "lambda", "method", "blocking"),
                   [(x if method == "real" else int(x), float(args.load), method, value)], args.format)
    return 0


def cmd_inverse(args, out) -> int:
    opts = SolveOptions(x_tol=args.x_tol)
    if args.mode == "servers":
        _need(args, "load", "target")
        result = min_servers(args.load, args.target, opts)
        check = core.erlang_b_int(result, args.load)
    elif args.mode == "servers-real":
        _need(args, "load", "target")
        cfg = _quadrature(args)
        result = solve_servers_real(args.load, args.target, opts, cfg)
        check = erlang_b_real(result, args.load, cfg)
    else:
        _need(args, "servers", "target")
        result = solve_traffic(args.servers, args.target, opts)
        check = core.erlang_b_int(args.servers, result)
    if args.format == "plain":
        out.write(fmt(result) + "\n")
        if args.round_trip:
            out.write(f"blocking {fmt(check)} residual {fmt(check - args.target)}\n")
    else:
        header = ["mode", "result"]
        row = [args.mode, result]
        if args.round_trip:
            header += ["blocking", "residual"]
            row += [check, check - args.target]
        _emit_rows(out, header, [row], args.format)
    return 0


def _need(args, *names):
    missing = [name for name in names if getattr(args, name) is None]
    if missing:
        raise DomainError(f"inverse {args.mode} needs " + ", ".join("--" + m for m in missing))


def cmd_verify(args, out, err) -> int:
    x_grid = tuple(0.5 * k for k in range(1, int(2 * args.x_max) + 1))
    grid = properties.SweepGrid(
        n_range=range(0, args.n_max + 1),
        load_grid=_loads(args.loads),
        index_limit=args.index_limit,
        x_grid=x_grid,
        quadrature=_quadrature(args),
    )
    reports = properties.run_sweep(grid)
    shown = [r for r in reports if not r.passed] if args.failures_only else reports
    if args.format == "csv":
        out.write(properties.reports_to_csv(shown))
    elif args.format == "json":
        out.write(properties.reports_to_jsonl(shown))
    else:
        for r in shown:
            row = r.as_row()
            out.write(" ".join(f"{key}={fmt(row[key])}" for key in properties.REPORT_FIELDS) + "\n")
    summary = properties.summarize(reports)
    err.write(
        "summary: "
        + " ".join(f"{key}={fmt(value) if value is not None else 'none'}" for key, value in summary.items())
        + "\n"
    )
    return 0 if summary["failed"] == 0 else 1


def cmd_table(args, out) -> int:
    ns = _n_range(args.n)
    loads = _loads(args.loads)
    seqs = {lam: core.erlang_b_sequence(ns.stop, lam) for lam in loads}
    rows = []
    for n in ns:
        for lam in loads:
            rows.append((n, lam, seqs[lam][n], core.phi(n, lam), core.scaled_partial_sum(n, lam)))
    _emit_rows(out, ("n", "lambda", "blocking", "phi", "scaled_partial_sum"), rows, args.format)
    return 0


def cmd_simulate(args, out) -> int:
    if args.seed == "auto":
        seed = secrets.randbits(63)
    else:
        try:
            seed = int(args.seed)
        except ValueError:
            raise DomainError(f"seed must be an integer or 'auto', got {args.seed!r}") from None
    cfg = SimConfig(servers=args.servers, load=args.load, arrivals=args.arrivals,
                    seed=seed, service=args.service)
    out.write(simulate(cfg).to_json() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erlangloss", description="Erlang's loss function toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, default="plain"):
        p.add_argument("--format", choices=("plain", "csv", "json"), default=default)

    def add_rel_tol(p):
        p.add_argument("--rel-tol", type=float, default=1e-12, help="quadrature tolerance")

    p = sub.add_parser("blocking", help="blocking probability B(n, load)")
    p.add_argument("servers", help="server count; '2' uses the integer recursion, '2.0' the continuation")
    p.add_argument("--load", type=float, required=True)
    p.add_argument("--method", choices=("int", "real"))
    add_rel_tol(p)
    add_format(p)

    p = sub.add_parser("inverse", help="dimensioning solvers")
    p.add_argument("mode", choices=("servers", "servers-real", "traffic"))
    p.add_argument("--load", type=float)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--servers", type=int)
    p.add_argument("--x-tol", type=float, default=1e-9)
    p.add_argument("--round-trip", action="store_true", help="re-evaluate B at the solution")
    add_rel_tol(p)
    add_format(p)

    p = sub.add_parser("verify", help="check every inequality over a grid")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--loads", default=",".join(fmt(v) for v in properties.DEFAULT_LOADS))
    p.add_argument("--index-limit", type=int, default=30)
    p.add_argument("--x-max", type=float, default=20.0, help="last abscissa of the convexity probes")
    p.add_argument("--failures-only", action="store_true")
    add_rel_tol(p)
    add_format(p)

    p = sub.add_parser("table", help="tabulate B, phi and the Poisson CDF")
    p.add_argument("--n", default="0..10", help="range such as 0..100")
    p.add_argument("--loads", default="1")
    add_format(p, default="csv")

    p = sub.add_parser("simulate", help="Monte Carlo loss system")
    p.add_argument("--servers", type=int, required=True)
    p.add_argument("--load", type=float, required=True)
    p.add_argument("--arrivals", type=int, default=1_000_000)
    p.add_argument("--seed", required=True, help="integer, or 'auto' for a fresh random seed")
    p.add_argument("--service", choices=("exponential", "deterministic"), default="exponential")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        if args.command == "blocking":
            code = cmd_blocking(args, buf)
        elif args.command == "inverse":
            code = cmd_inverse(args, buf)
        elif args.command == "verify":
            code = cmd_verify(args, buf, err)
        elif args.command == "table":
            code = cmd_table(args, buf)
        else:
            code = cmd_simulate(args, buf)
    except (DomainError, ConvergenceError) as exc:
        err.write(f"erlangloss {args.command}: {exc}\n")
        return 2
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
