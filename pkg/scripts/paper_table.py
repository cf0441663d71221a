"""Re-run the table rows this package can build and compare d values."""

import argparse
import sys

from permgen import bench


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-degree", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    cfg = bench.BenchConfig(suite="paper-table", seed=args.seed, max_degree=args.max_degree,
                            jobs=args.jobs)
    ok = True
    print(f"{'group':28s} {'n':>4s} {'d':>3s} {'want':>4s} {'tests':>6s} {'time':>8s}")
    for r in bench.run_suite(cfg):
        ok &= r.d == r.expected_d
        print(f"{r.group:28s} {r.degree:4d} {r.d:3d} {r.expected_d:4d} {r.total_tests:6d} "
              f"{r.wall_time:7.2f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
