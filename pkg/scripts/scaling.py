"""Generating tests against n^2 ln n over A5^k, one fitted constant per seed."""

import argparse
import statistics
import sys

from permgen import bench


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=95)
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--no-fast-paths", action="store_true")
    args = ap.parse_args()
    constants = []
    for s in range(args.seeds):
        cfg = bench.BenchConfig(suite="scaling", max_degree=args.max_degree, runs=args.runs,
                                seed=1000 * s, jobs=args.jobs,
                                enable_fast_paths=not args.no_fast_paths)
        results = bench.run_suite(cfg)
        by_degree = {}
        for r in results:
            by_degree.setdefault(r.degree, []).append(r.total_tests)
        pts = [(r.degree, r.total_tests) for r in results]
        c = bench.fit_constant(pts)
        constants.append(c)
        print(f"seed {1000 * s}: C = {c:.6f}, bounding C = {bench.bound_constant(pts):.6f}")
        for n, tests in sorted(by_degree.items()):
            print(f"  n={n:3d} mean tests {statistics.mean(tests):8.1f}")
    mean = statistics.mean(constants)
    spread = max(abs(c - mean) / mean for c in constants)
    print(f"mean C = {mean:.6f}, largest deviation {spread:.1%}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
