"""Command line: ``permgen mingen|chief|order|bench``.

Exit codes: 0 success, 1 error, 2 exhaustive cap exceeded, 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import bench
from .constructions import build
from .mingen import CERTIFIED, HEURISTIC, ExhaustiveCapExceeded, SolveOptions, smallest_generating_set
from .oracle import ORACLE_MAX_ORDER, oracle_min_gen
from .perm import print_cycles
from .structure import ABELIAN_HIGH, AS_FOUND, chief_series

EXIT_OK, EXIT_ERROR, EXIT_CAP, EXIT_ORACLE = 0, 1, 2, 3


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_mingen(args) -> int:
    G = build(args.spec)
    opts = SolveOptions(seed=args.seed, mode=args.mode, enable_fast_paths=not args.no_fast_paths)
    try:
        gens, stats = smallest_generating_set(G, opts)
    except ExhaustiveCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    code = EXIT_OK
    if args.oracle_check:
        if G.order <= ORACLE_MAX_ORDER:
            expected = oracle_min_gen(G)
            if expected != len(gens):
                print(f"oracle mismatch: oracle d = {expected}, mingen d = {len(gens)}",
                      file=sys.stderr)
                code = EXIT_ORACLE
        else:
            print(f"oracle check skipped: |G| = {G.order} exceeds {ORACLE_MAX_ORDER}",
                  file=sys.stderr)
    cycles = [print_cycles(g) for g in gens]
    if args.json:
        _emit({
            "group": G.name,
            "degree": G.degree,
            "order": str(G.order),
            "d": len(gens),
            "gens": cycles,
            "stats": stats.as_dict(),
            "mode": args.mode,
            "seed": args.seed,
            "certified_minimal": stats.certified_minimal,
        })
        return code
    print(f"group: {G.name}")
    print(f"degree: {G.degree}")
    print(f"order: {G.order}")
    print(f"d = {len(gens)}")
    for c in cycles:
        print(f"  {c}")
    if not stats.certified_minimal:
        print("size not certified minimal")
    if args.stats:
        print(f"ss_tests: {stats.ss_tests}")
        print(f"rss_tests: {stats.rss_tests}")
        print(f"random_elements: {stats.random_elements}")
        print(f"abelian_ss_tests: {stats.abelian_ss_tests}")
        print(f"early_stop_tests: {stats.early_stop_tests}")
        for r in stats.per_factor:
            print(f"  factor {r.index}: order {r.order} {r.branch} "
                  f"trials={r.trials} ss={r.ss_tests} rss={r.rss_tests}")
    return code


def cmd_chief(args) -> int:
    G = build(args.spec)
    cs = chief_series(G, args.ordering, rng=random.Random(args.seed))
    if args.json:
        _emit({"group": G.name, "degree": G.degree, "order": str(G.order), **cs.as_dict()})
        return EXIT_OK
    print(f"factors: [{', '.join(str(f.order) for f in cs.factors)}]")
    print(f"delta': [{', '.join(str(f.delta_prime) for f in cs.factors)}]")
    print(f"t': [{', '.join(str(f.t_prime) for f in cs.factors)}]")
    return EXIT_OK


def cmd_order(args) -> int:
    print(build(args.spec).order)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(suite=args.suite, max_degree=args.max_degree, runs=args.runs,
                            seed=args.seed, jobs=args.jobs,
                            enable_fast_paths=not args.no_fast_paths)
    results = bench.run_suite(cfg)
    for r in results:
        if args.json:
            _emit(r.as_dict())
        else:
            exp = "" if r.expected_d is None else f" (expected {r.expected_d})"
            print(f"{r.group:28s} n={r.degree:<4d} seed={r.seed:<4d} d={r.d}{exp} "
                  f"tests={r.total_tests:<6d} time={r.wall_time:.3f}s")
    bad = [r for r in results if r.expected_d is not None and r.d != r.expected_d]
    if cfg.suite == "scaling":
        pts = [(r.degree, r.total_tests) for r in results]
        fit, bound = bench.fit_constant(pts), bench.bound_constant(pts)
        if args.json:
            _emit({"fit_C": fit, "bound_C": bound})
        else:
            print(f"fitted C = {fit:.6f} (tests ~ C n^2 ln n); bounding C = {bound:.6f}")
    return EXIT_ERROR if bad else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="permgen",
                                 description="Smallest generating sets of permutation groups.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mingen", help="find a smallest generating set")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=[CERTIFIED, HEURISTIC], default=CERTIFIED)
    p.add_argument("--no-fast-paths", action="store_true")
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mingen)

    p = sub.add_parser("chief", help="print a chief series")
    p.add_argument("spec")
    p.add_argument("--ordering", choices=[ABELIAN_HIGH, AS_FOUND], default=ABELIAN_HIGH)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chief)

    p = sub.add_parser("order", help="print the group order")
    p.add_argument("spec")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", choices=["paper-table", "scaling"], default="paper-table")
    p.add_argument("--max-degree", type=int, default=None,
                   help="largest degree to include (scaling default 95)")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-fast-paths", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
