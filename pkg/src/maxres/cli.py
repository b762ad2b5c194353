"""Command-line front end.

Output follows the usual Max-SAT evaluation line protocol: ``o <cost>``,
``s OPTIMUM|UNSATISFIABLE|UNKNOWN`` and ``c <key> <value>`` statistics.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from . import formats, instances
from .elimination import ORDERS, EliminationStats, ResourceLimitError, max_dp
from .formats import ParseError
from .oracle import OracleLimitError, brute_force_opt
from .search import SolverConfig, max_dpll

EXIT_OK = 0
EXIT_UNKNOWN = 10
EXIT_RESOURCE = 20
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _status_lines(optimum: int, top: int, status: str) -> list[str]:
    return [f"o {optimum}", f"s {status.upper()}"]


def cmd_solve(args, out: TextIO) -> int:
    f = formats.parse_wcnf(_read(args.file))
    cfg = SolverConfig(level=args.level, star=args.star, duc=args.duc, top=args.top,
                       time_limit=args.timeout, node_limit=args.node_limit,
                       heuristic=args.heuristic, seed=args.seed)
    res = max_dpll(f, cfg)
    for line in _status_lines(res.optimum, res.top, res.status):
        print(line, file=out)
    if args.stats:
        stats = res.stats
        if not args.timing:
            stats.pop("time")
        for k, v in stats.items():
            print(f"c {k} {v}", file=out)
    return EXIT_UNKNOWN if res.status == "unknown" else EXIT_OK


def cmd_dp(args, out: TextIO) -> int:
    f = formats.parse_wcnf(_read(args.file))
    if args.top is not None:
        f.set_top(args.top)
    given = [int(x) for x in args.elim_order.split(",")] if args.elim_order else None
    stats = EliminationStats()
    opt = max_dp(f, args.order, given=given, clause_cap=args.clause_cap, stats=stats)
    status = "optimum" if opt < f.top else "unsatisfiable"
    for line in _status_lines(opt, f.top, status):
        print(line, file=out)
    if args.stats:
        for k, v in stats.as_dict().items():
            print(f"c {k} {v}", file=out)
    return EXIT_OK


def cmd_oracle(args, out: TextIO) -> int:
    f = formats.parse_wcnf(_read(args.file))
    opt, witness = brute_force_opt(f, cap=args.cap)
    for line in _status_lines(opt, f.top, "optimum" if opt < f.top else "unsatisfiable"):
        print(line, file=out)
    if witness is not None:
        print("v " + " ".join(str(v if val else -v) for v, val in witness.items()), file=out)
    return EXIT_OK


def cmd_encode(args, out: TextIO) -> int:
    text = _read(args.file)
    if args.problem in ("vc", "clique", "maxcut"):
        g = formats.parse_graph(text)
        if args.problem == "maxcut":
            f = instances.encode_max_cut(g)
        else:
            f = instances.encode_vertex_cover(g, top=args.top, clique=args.problem == "clique")
    elif args.problem == "maxone":
        n, clauses = formats.parse_cnf(text)
        f = instances.encode_max_one(clauses, n)
    else:
        f = instances.encode_auction(formats.parse_auction(text))
    out.write(formats.write_wcnf(f))
    return EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    try:
        if args.kind == "ksat":
            f = instances.gen_random_wcnf(args.k, args.n, args.m, args.seed,
                                          max_weight=args.max_weight,
                                          hard_fraction=args.hard_fraction, top=args.top)
            out.write(formats.write_wcnf(f))
        elif args.kind == "graph":
            out.write(formats.write_graph(instances.gen_random_graph(args.n, args.e, args.seed)))
        elif args.kind == "path":
            out.write(formats.write_wcnf(instances.gen_path_formula(args.n, args.seed)))
        else:
            a = instances.gen_random_auction(args.bids, args.goods, args.seed)
            out.write(formats.write_auction(a))
    except ValueError as e:
        raise UsageError(str(e)) from None
    return EXIT_OK


def cmd_export_opb(args, out: TextIO) -> int:
    out.write(formats.export_opb(formats.parse_wcnf(_read(args.file))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="maxres", description="Weighted Max-SAT solving by resolution and branch and bound.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="branch and bound (Max-DPLL)")
    s.add_argument("file", help="WCNF file, '-' for stdin")
    s.add_argument("--level", type=int, choices=(1, 2, 3, 4), default=4,
                   help="inference level (default 4)")
    s.add_argument("--star", action="store_true", help="enable the star rule")
    s.add_argument("--duc", action="store_true", help="enable the dominating unit clause rule")
    s.add_argument("--top", type=int, help="override the upper bound")
    s.add_argument("--timeout", type=float, help="time limit in seconds")
    s.add_argument("--node-limit", type=int, help="search node limit")
    s.add_argument("--heuristic", choices=("jw", "index", "random"), default="jw")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--stats", action="store_true", help="print 'c key value' statistics")
    s.add_argument("--timing", action="store_true", help="include wall time in statistics")
    s.set_defaults(run=cmd_solve)

    d = sub.add_parser("dp", help="variable elimination (Max-DP)")
    d.add_argument("file")
    d.add_argument("--order", choices=ORDERS, default="mindeg")
    d.add_argument("--elim-order", help="comma-separated variables for --order given")
    d.add_argument("--clause-cap", type=int, help="abort above this many stored clauses")
    d.add_argument("--top", type=int)
    d.add_argument("--stats", action="store_true")
    d.set_defaults(run=cmd_dp)

    e = sub.add_parser("encode", help="encode a combinatorial problem as WCNF")
    e.add_argument("problem", choices=("vc", "clique", "maxcut", "maxone", "auction"))
    e.add_argument("file", help="DIMACS graph, CNF or auction file")
    e.add_argument("--top", type=int, help="pin top for vc/clique")
    e.set_defaults(run=cmd_encode)

    g = sub.add_parser("gen", help="seeded random instances")
    gsub = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    k = gsub.add_parser("ksat", help="random weighted k-CNF")
    k.add_argument("k", type=int)
    k.add_argument("n", type=int)
    k.add_argument("m", type=int)
    k.add_argument("--max-weight", type=int, default=1)
    k.add_argument("--hard-fraction", type=float, default=0.0)
    k.add_argument("--top", type=int)
    gr = gsub.add_parser("graph", help="random graph with e edges")
    gr.add_argument("n", type=int)
    gr.add_argument("e", type=int)
    pa = gsub.add_parser("path", help="formula whose interaction graph is a path")
    pa.add_argument("n", type=int)
    au = gsub.add_parser("auction", help="random combinatorial auction")
    au.add_argument("bids", type=int)
    au.add_argument("goods", type=int)
    for sp in (k, gr, pa, au):
        sp.add_argument("--seed", type=int, default=0)
    g.set_defaults(run=cmd_gen)

    x = sub.add_parser("export-opb", help="write the pseudo-Boolean encoding")
    x.add_argument("file")
    x.set_defaults(run=cmd_export_opb)

    o = sub.add_parser("oracle", help="brute-force optimum (small instances)")
    o.add_argument("file")
    o.add_argument("--cap", type=int, default=24)
    o.set_defaults(run=cmd_oracle)
    return p


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args, out)
    except UsageError as e:
        print(parser.format_usage().rstrip(), file=err)
        print(e, file=err)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        return EXIT_PARSE
    except (ResourceLimitError, OracleLimitError) as e:
        print(f"c aborted: {e}", file=out)
        print("s UNKNOWN", file=out)
        return EXIT_RESOURCE
    except OSError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except SystemExit as e:      # --help
        return int(e.code or 0)


def main() -> None:
    sys.exit(run())
