"""Command-line front end: ``derange exact|ratio|series|bounds|verify``.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters, 3 term budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import asymptotics as asy
from .counting import DEFAULT_TERM_BUDGET, TermBudgetExceeded, count
from .graphs import read_edge_list
from .matchpoly import check_mu_bounds
from .verify import run_checks

EXIT_OK, EXIT_VERIFY, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

FAMILY_ALIASES = {
    "derangement": "derangement",
    "deranged-matching": "deranged_matching",
    "tripartite": "tripartite",
    "tripartite-minus-m": "tripartite_minus_M",
    "bpm": "bpm",
    "bpm-minus-m": "bpm_minus_M",
    "multipartite": "multipartite",
    "multipartite-minus-m": "multipartite_minus_M",
    "custom": "custom",
}
REGIME_ALIASES = {
    "hatcheck": "r2_hatcheck",
    "kindergartner": "r2n_kindergartner",
    "r3": "r3_tripartite",
    "bpm": "bpm_general",
    "regular": "regular_removal",
    "constant": "constant_class",
}
FAMILY_PARAMS = {
    "derangement": ("n",), "deranged_matching": ("n",), "tripartite": ("m",), "tripartite_minus_M": ("m",),
    "bpm": ("r", "m"), "bpm_minus_M": ("r", "m"), "multipartite": ("r", "c"), "multipartite_minus_M": ("r", "c"),
    "custom": (),
}


class InvalidParameters(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    format: str = "plain"
    precision: int = 50
    term_budget: int = DEFAULT_TERM_BUDGET
    output_path: Path | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.precision < 15:
            raise InvalidParameters("precision must be >= 15")
        if self.term_budget < 10**4:
            raise InvalidParameters("term budget must be >= 10^4")
        if self.jobs < 1:
            raise InvalidParameters("jobs must be >= 1")


def _term_budget(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("DERANGE_TERM_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidParameters(f"DERANGE_TERM_BUDGET={env!r} is not an integer") from None
    return DEFAULT_TERM_BUDGET


def cmd_exact(cfg: RunConfig) -> str:
    p = dict(cfg.parameters)
    family = FAMILY_ALIASES[p.pop("family")]
    graph = None
    if family == "custom":
        if not p.get("graph"):
            raise InvalidParameters("--graph is required for the custom family")
        graph, _ = read_edge_list(p["graph"])
    params = {}
    for key in FAMILY_PARAMS[family]:
        if p.get(key) is None:
            raise InvalidParameters(f"--{key} is required for family {family}")
        params[key] = p[key]
    res = count(family, method=p.get("method"), term_budget=cfg.term_budget, jobs=cfg.jobs, graph=graph, **params)
    if cfg.format == "json":
        return res.to_json() + "\n"
    if cfg.format == "csv":
        keys = sorted(res.params)
        head = ["family", *keys, "value", "method"]
        row = [res.family, *(str(res.params[k]) for k in keys), str(res.value), res.method]
        return ",".join(head) + "\n" + ",".join(row) + "\n"
    lines = [("family", res.family)] + [(k, str(v)) for k, v in sorted(res.params.items())]
    lines += [("value", str(res.value)), ("method", res.method)]
    return _two_columns(lines)


def _two_columns(lines) -> str:
    width = max(len(k) for k, _ in lines)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in lines)


def _sweep_values(regime: str, p: dict) -> range | list[int]:
    key = asy.SWEEP_PARAM[regime]
    hi = p.get(f"{key}_max")
    if hi is None:
        raise InvalidParameters(f"--{key}-max is required for this regime")
    lo = p.get(f"{key}_min")
    if lo is None:
        lo = 2 if regime == "regular_removal" and p.get("d") == 2 else 1
    if lo < 1 or hi < lo:
        raise InvalidParameters(f"need 1 <= {key}-min <= {key}-max")
    values = range(lo, hi + 1)
    if regime == "constant_class":
        c = p.get("c")
        if c is None:
            raise InvalidParameters("--c is required for the constant regime")
        values = [n for n in values if (2 * n) % c == 0 and 2 * n // c >= 2]
    return values


def cmd_ratio_table(cfg: RunConfig) -> str:
    p = cfg.parameters
    regime = REGIME_ALIASES[p["regime"]]
    fixed: dict = {}
    if regime == "bpm_general":
        if p.get("r") is None:
            raise InvalidParameters("--r is required for the bpm regime")
        fixed.update(r=p["r"], term_budget=cfg.term_budget, jobs=cfg.jobs)
    if regime == "regular_removal":
        if p.get("d") is None:
            raise InvalidParameters("--d is required for the regular regime")
        fixed.update(d=p["d"], family=p.get("complement"))
        if p.get("complement") == "custom":
            raise InvalidParameters("the custom complement family is only available from the library")
    if regime == "constant_class":
        fixed.update(c=p.get("c"))
    records = asy.convergence_table(regime, _sweep_values(regime, p), cfg.precision, **fixed)
    if cfg.format == "csv":
        return asy.table_csv(records)
    if cfg.format == "json":
        return asy.table_json(records)
    rows = [rec.row() for rec in records]
    cols = [c for c in asy.CSV_COLUMNS if any(r[c] for r in rows)]
    widths = {c: max(len(c), *(len(r[c]) for r in rows)) for c in cols}
    out = ["  ".join(c.ljust(widths[c]) for c in cols)]
    out += ["  ".join(r[c].ljust(widths[c]) for c in cols) for r in rows]
    return "\n".join(line.rstrip() for line in out) + "\n"


def cmd_series(cfg: RunConfig) -> str:
    r, t = cfg.parameters["r"], cfg.parameters["terms"]
    if r < 2:
        raise InvalidParameters("r must be >= 2")
    if t < 0:
        raise InvalidParameters("terms must be >= 0")
    s = asy.truncated_limit_series(r, t, cfg.precision)
    fields = [("r", str(r)), ("terms", str(t)), ("value", str(s.value)), ("target", str(s.target)),
              ("tail_bound", str(s.tail_bound)), ("actual_error", str(s.actual_error)),
              ("bound_holds", str(s.actual_error <= s.tail_bound).lower())]
    if cfg.format == "json":
        return json.dumps(dict(fields)) + "\n"
    if cfg.format == "csv":
        return ",".join(k for k, _ in fields) + "\n" + ",".join(v for _, v in fields) + "\n"
    return _two_columns(fields)


def cmd_bounds(cfg: RunConfig) -> str:
    graph, _ = read_edge_list(cfg.parameters["graph"])
    rep = check_mu_bounds(graph, cfg.parameters["d"])
    if cfg.format == "json":
        return json.dumps(rep.as_dict(), indent=2) + "\n"
    lines = [f"{c.k:>3}  {c.bound:<11}  mu_k={c.mu_k}  bound={c.value}  {'ok' if c.holds else 'VIOLATED'}"
             for c in rep.checks]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "csv", "json"), default="plain")
    common.add_argument("--precision", type=int, default=50, help="working decimal digits (>= 15)")
    common.add_argument("--term-budget", type=int, default=None,
                        help="max terms in a multi-index sum (env DERANGE_TERM_BUDGET; flag wins)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--output", type=Path, default=None, help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="derange", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("exact", parents=[common], help="exact count for one family")
    ex.add_argument("--family", required=True, choices=sorted(FAMILY_ALIASES))
    for name in ("n", "m", "r", "c"):
        ex.add_argument(f"--{name}", type=int)
    ex.add_argument("--method", choices=("closed_form", "pie_sum", "load_dp", "complement_identity", "recurrence",
                                          "oracle"))
    ex.add_argument("--graph", help="edge-list file for --family custom")

    ra = sub.add_parser("ratio", parents=[common], help="convergence table for a regime")
    ra.add_argument("--regime", required=True, choices=sorted(REGIME_ALIASES))
    for name in ("n", "m"):
        ra.add_argument(f"--{name}-min", type=int)
        ra.add_argument(f"--{name}-max", type=int)
    ra.add_argument("--r", type=int)
    ra.add_argument("--c", type=int)
    ra.add_argument("--d", type=int)
    ra.add_argument("--complement", choices=("union_of_cycles", "union_of_matchings"),
                    help="d-regular complement family for the regular regime")

    se = sub.add_parser("series", parents=[common], help="tail-bounded truncation of the limit product")
    se.add_argument("--r", type=int, required=True)
    se.add_argument("--terms", type=int, default=30)

    bo = sub.add_parser("bounds", parents=[common], help="k-matching bounds for a d-regular graph")
    bo.add_argument("--graph", required=True)
    bo.add_argument("--d", type=int, required=True)

    ve = sub.add_parser("verify", help="run oracle-equivalence and invariant checks")
    ve.add_argument("--suite", choices=("fast", "full"), default="fast")
    ve.add_argument("--fixtures", type=Path, default=None, help="fixture file (default: bundled)")
    return parser


COMMANDS = {"exact": cmd_exact, "ratio": cmd_ratio_table, "series": cmd_series, "bounds": cmd_bounds}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return EXIT_OK if run_checks(args.suite, args.fixtures) else EXIT_VERIFY
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "format", "precision", "term_budget", "jobs", "output")}
    try:
        cfg = RunConfig(args.command, params, args.format, args.precision, _term_budget(args.term_budget),
                        args.output, args.jobs)
        text = COMMANDS[args.command](cfg)
    except TermBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.output_path is not None:
        cfg.output_path.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
