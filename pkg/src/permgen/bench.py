"""Benchmark suites: the published table rows and the A5^k scaling family."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .constructions import build
from .mingen import SolveOptions, smallest_generating_set

# (spec, expected d) for the table rows this package can build
PAPER_TABLE = [
    ("direct_power(psl_3_2, 2)", 2),
    ("crown_inversion(3, 30)", 31),
    ("direct_power(alt(5), 19)", 2),
    ("direct_power(alt(5), 20)", 3),
    ("direct_power(psl_3_2, 57)", 2),
]


@dataclass
class BenchConfig:
    suite: str = "paper-table"
    max_degree: int | None = None
    runs: int = 1
    seed: int = 0
    jobs: int = 1
    enable_fast_paths: bool = True


@dataclass
class BenchResult:
    index: int
    group: str
    degree: int
    seed: int
    d: int
    expected_d: int | None
    wall_time: float
    total_tests: int
    ss_tests: int
    rss_tests: int

    def as_dict(self) -> dict:
        return asdict(self)


def instances(cfg: BenchConfig) -> list[tuple[str, int | None]]:
    if cfg.suite == "paper-table":
        limit = cfg.max_degree
        rows = [(s, d) for s, d in PAPER_TABLE if limit is None or build_degree(s) <= limit]
    elif cfg.suite == "scaling":
        top = (95 if cfg.max_degree is None else cfg.max_degree) // 5
        rows = [(f"direct_power(alt(5), {k})", 2 if k <= 19 else 3) for k in range(1, top + 1)]
    else:
        raise ValueError(f"unknown suite {cfg.suite!r}")
    return [row for _ in range(cfg.runs) for row in rows]


def build_degree(spec: str) -> int:
    return build(spec).degree


def run_one(args) -> BenchResult:
    index, spec, expected, seed, fast = args
    G = build(spec)
    t0 = time.perf_counter()
    gens, stats = smallest_generating_set(G, SolveOptions(seed=seed, enable_fast_paths=fast))
    wall = time.perf_counter() - t0
    return BenchResult(
        index=index,
        group=spec,
        degree=G.degree,
        seed=seed,
        d=len(gens),
        expected_d=expected,
        wall_time=round(wall, 4),
        total_tests=stats.total_tests,
        ss_tests=stats.ss_tests,
        rss_tests=stats.rss_tests,
    )


def run_suite(cfg: BenchConfig) -> list[BenchResult]:
    jobs = [
        (i, spec, d, cfg.seed + i, cfg.enable_fast_paths)
        for i, (spec, d) in enumerate(instances(cfg))
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(run_one, jobs))
    return [run_one(j) for j in jobs]


def scale(n: int) -> float:
    return n * n * math.log(n)


def fit_constant(points: list[tuple[int, int]]) -> float:
    """Least-squares ``C`` for ``tests ~ C * n^2 ln n`` through the origin."""
    num = sum(t * scale(n) for n, t in points if n > 1)
    den = sum(scale(n) ** 2 for n, t in points if n > 1)
    return num / den if den else 0.0


def bound_constant(points: list[tuple[int, int]]) -> float:
    """Smallest ``C`` with ``tests <= C * n^2 ln n`` at every point."""
    return max((t / scale(n) for n, t in points if n > 1), default=0.0)
