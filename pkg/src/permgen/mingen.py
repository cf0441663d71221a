"""Smallest generating sets by lifting through a chief series.

Generators of the top factor ``G/N_{u-1}`` are found first; they are then
lifted one chief factor at a time until they generate ``G``.  Each lifting
step either adjusts the current generators by factor elements (the size ``d``
stays) or appends one element (``d`` grows by one), and the algorithm only
appends after proving that no adjustment exists.  The returned set is always
checked by deterministic Schreier-Sims before it is handed back.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field

from .bsgs import (
    DEFAULT_EPSILON,
    FactorRecord,
    GenTestStats,
    Group,
    generates,
)
from .perm import inv, mul, power
from .structure import (
    ABELIAN_HIGH,
    ChiefSeries,
    canonical_coset_rep,
    chief_series,
    coset_representatives,
    derived_subgroup,
    factorize,
    normal_closure,
    subgroup,
)

__all__ = [
    "CERTIFIED",
    "HEURISTIC",
    "SolveOptions",
    "LiftState",
    "CapExceeded",
    "ExhaustiveCapExceeded",
    "InternalInconsistency",
    "smallest_generating_set",
    "top_factor_generators",
    "lift_abelian",
    "lift_nonabelian",
    "exhaustive_search",
    "fast_paths",
    "early_stop_check",
    "sampling_budget",
    "default_cap",
]

CERTIFIED = "certified"
HEURISTIC = "heuristic"

DEFAULT_CAP = 10**7
CAP_ENV = "PERMGEN_EXHAUSTIVE_CAP"


class CapExceeded(RuntimeError):
    pass


class ExhaustiveCapExceeded(CapExceeded):
    pass


class InternalInconsistency(RuntimeError):
    pass


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be at least 1")
    return cap


@dataclass
class SolveOptions:
    seed: int = 0
    mode: str = CERTIFIED
    exhaustive_cap: int = field(default_factory=default_cap)
    rss_epsilon: float = DEFAULT_EPSILON
    enable_fast_paths: bool = True
    quick_attempts: int = 8
    orbit_reduce: bool = True
    early_stop: bool = True
    ordering: str = ABELIAN_HIGH

    def __post_init__(self):
        if self.mode not in (CERTIFIED, HEURISTIC):
            raise ValueError(f"mode must be {CERTIFIED!r} or {HEURISTIC!r}")
        if self.exhaustive_cap < 1:
            raise ValueError("exhaustive_cap must be at least 1")
        if not 0 < self.rss_epsilon < 1:
            raise ValueError("rss_epsilon must lie in (0, 1)")
        if self.quick_attempts < 0:
            raise ValueError("quick_attempts must be non-negative")


@dataclass
class LiftState:
    """Generators of ``G`` modulo ``series.subgroups[k]``."""

    G: Group
    series: ChiefSeries
    k: int
    gens: list[tuple]
    stats: GenTestStats
    opts: SolveOptions
    rng: random.Random

    @property
    def d(self) -> int:
        return len(self.gens)

    def below(self, k: int) -> Group:
        return self.series.subgroups[k - 1]

    def factor_group(self, k: int) -> Group:
        return self.series.subgroups[k]


def sampling_budget(d: int, dprime: int, factor_order: int) -> int:
    """Random d-tuples tried before the exhaustive sweep, with natural log."""
    return math.ceil(90 * d * dprime * math.log(factor_order) / 53)


# ---------------------------------------------------------------------------
# counters


class _Tally:
    """Per-factor accounting as differences of the run counters."""

    def __init__(self, stats: GenTestStats, index: int, order: int, abelian: bool):
        self.stats = stats
        self.rec = FactorRecord(index=index, order=order, abelian=abelian, branch="")
        self.ss0 = stats.ss_tests
        self.rss0 = stats.rss_tests

    def close(self, branch: str) -> None:
        self.rec.branch = branch
        self.rec.ss_tests = self.stats.ss_tests - self.ss0
        self.rec.rss_tests = self.stats.rss_tests - self.rss0
        self.stats.per_factor.append(self.rec)


def _draw(group: Group, rng: random.Random, stats: GenTestStats) -> tuple:
    stats.random_elements += 1
    return group.random_element(rng)


def _rss(state: LiftState, cands, modulo: Group | None) -> bool:
    return generates(cands, state.G, "RSS", state.stats, modulo=modulo,
                     rng=state.rng, epsilon=state.opts.rss_epsilon)


def _ss(state: LiftState, cands, modulo: Group | None) -> bool:
    return generates(cands, state.G, "SS", state.stats, modulo=modulo)


# ---------------------------------------------------------------------------
# top factor


def top_factor_generators(
    G: Group,
    series: ChiefSeries,
    rng: random.Random,
    stats: GenTestStats,
    opts: SolveOptions | None = None,
) -> LiftState:
    opts = opts or SolveOptions()
    u = series.u
    top = series.factor(u)
    below = series.subgroups[u - 1]
    state = LiftState(G, series, u - 1, [], stats, opts, rng)
    tally = _Tally(stats, u, top.order, top.abelian)
    if top.abelian:
        for g in G.generators:
            if not below.chain.sifts(g):
                state.gens = [g]
                break
        else:
            raise InternalInconsistency("no generator outside the top subgroup")
        tally.close("top-abelian")
        return state
    while True:
        tally.rec.trials += 1
        pair = [_draw(G, rng, stats), _draw(G, rng, stats)]
        if _rss(state, pair, below):
            state.gens = pair
            break
    tally.close("top-nonabelian")
    return state


# ---------------------------------------------------------------------------
# abelian factors


def _layer_basis(N: Group, M: Group, p: int) -> list[tuple]:
    """Generators of N that form a basis of the elementary abelian N/M."""
    basis = []
    cur = M
    for y in N.generators:
        if cur.order == N.order:
            break
        if not cur.chain.sifts(y):
            cur = subgroup(N.degree, [y], base=cur, order=cur.order * p)
            basis.append(y)
    return basis


def lift_abelian(state: LiftState, k: int) -> LiftState:
    info = state.series.factor(k)
    N, M = state.factor_group(k), state.below(k)
    stats = state.stats
    tally = _Tally(stats, k, info.order, True)
    basis = _layer_basis(N, M, info.p)
    gens = state.gens

    stats.abelian_ss_tests += 1
    if _ss(state, gens, M):
        tally.close("abelian-keep")
        state.k = k - 1
        return state
    for i in range(len(gens)):
        for e in basis:
            trial = list(gens)
            trial[i] = mul(gens[i], e)
            tally.rec.trials += 1
            stats.abelian_ss_tests += 1
            if _ss(state, trial, M):
                state.gens = trial
                tally.close("abelian-adjust")
                state.k = k - 1
                return state
    state.gens = gens + [basis[0]]
    if not _ss(state, state.gens, M):
        raise InternalInconsistency(f"appending a layer element failed at factor {k}")
    tally.close("abelian-append")
    state.k = k - 1
    return state


# ---------------------------------------------------------------------------
# non-abelian factors


def _sample_until(state: LiftState, k: int, extra: int, tally: _Tally, limit: int | None):
    """Sample ``(g_i n_i) + extra`` factor elements until RSS says generating."""
    N, M = state.factor_group(k), state.below(k)
    tries = 0
    while limit is None or tries < limit:
        tries += 1
        tally.rec.trials += 1
        cands = [mul(g, _draw(N, state.rng, state.stats)) for g in state.gens]
        cands += [_draw(N, state.rng, state.stats) for _ in range(extra)]
        if _rss(state, cands, M):
            return cands
    return None


def exhaustive_search(state: LiftState, k: int, orbit_reduce: bool = True):
    """All tuples ``(g_1 n_1, ..., g_d n_d)`` with ``n_i`` over ``N_k/N_{k-1}``.

    Returns a generating tuple of elements or ``None``.  With
    ``orbit_reduce`` one tuple per orbit under conjugation by the factor is
    tested.
    """
    N, M = state.factor_group(k), state.below(k)
    r = N.order // M.order
    d = state.d
    total = r**d
    if total > state.opts.exhaustive_cap:
        raise ExhaustiveCapExceeded(
            f"exhaustive sweep of {total} tuples exceeds the cap {state.opts.exhaustive_cap}"
        )
    reps = coset_representatives(N, M)
    gens = state.gens
    if not orbit_reduce:
        for idx in itertools.product(range(r), repeat=d):
            cands = [mul(g, reps[a]) for g, a in zip(gens, idx)]
            if _ss(state, cands, M):
                return cands
        return None

    mc = M.chain
    index = {x: i for i, x in enumerate(reps)}
    # moves[i][a][b]: index of (m_a^-1)^(g_i) n_b m_a modulo M
    moves = []
    for g in gens:
        gi = inv(g)
        per_m = []
        for m in reps:
            c = mul(mul(gi, inv(m)), g)
            per_m.append([index[canonical_coset_rep(mc, mul(mul(c, n), m))] for n in reps])
        moves.append(per_m)
    # same lexicographic order as itertools.product
    radix = [r ** (d - 1 - i) for i in range(d)]
    seen = bytearray(total)
    for code in range(total):
        if seen[code]:
            continue
        idx = [(code // radix[i]) % r for i in range(d)]
        for a in range(r):
            seen[sum(moves[i][a][idx[i]] * radix[i] for i in range(d))] = 1
        cands = [mul(g, reps[b]) for g, b in zip(gens, idx)]
        if _ss(state, cands, M):
            return cands
    return None


def lift_nonabelian(state: LiftState, k: int, rng: random.Random | None = None) -> LiftState:
    if rng is not None:
        state.rng = rng
    info = state.series.factor(k)
    stats = state.stats
    tally = _Tally(stats, k, info.order, False)
    d = state.d

    if d == 1:
        state.gens = _sample_until(state, k, 1, tally, None)
        tally.close("nonabelian-pair")
    elif info.t_prime <= d:
        state.gens = _sample_until(state, k, 0, tally, None)
        tally.close("nonabelian-adjust")
    else:
        budget = sampling_budget(d, info.delta_prime, info.order)
        found = _sample_until(state, k, 0, tally, budget)
        if found is not None:
            state.gens = found
            tally.close("nonabelian-budget")
        else:
            total = info.order**d
            if total <= state.opts.exhaustive_cap:
                found = exhaustive_search(state, k, state.opts.orbit_reduce)
                if found is not None:
                    state.gens = found
                    tally.close("nonabelian-exhaustive")
                else:
                    state.gens = _sample_until(state, k, 1, tally, None)
                    tally.close("nonabelian-append")
            elif state.opts.mode == CERTIFIED:
                raise ExhaustiveCapExceeded(
                    f"factor {k}: exhaustive sweep of {info.order}^{d} tuples "
                    f"exceeds the cap {state.opts.exhaustive_cap}"
                )
            else:
                state.gens, appended = _race(state, k, tally)
                if appended:
                    stats.certified_minimal = False
                tally.close("nonabelian-heuristic-append" if appended else "nonabelian-heuristic")
    state.k = k - 1
    return state


def _race(state: LiftState, k: int, tally: _Tally) -> tuple[list[tuple], bool]:
    """Alternate same-size and one-larger sampling; report which won."""
    while True:
        found = _sample_until(state, k, 0, tally, 1)
        if found is not None:
            return found, False
        found = _sample_until(state, k, 1, tally, 1)
        if found is not None:
            return found, True


# ---------------------------------------------------------------------------
# fast paths


def _sylow_if_normal(G: Group, p: int) -> Group | None:
    order = G.order
    pp = 1
    rest = order
    while rest % p == 0:
        rest //= p
        pp *= p
    P = subgroup(G.degree, [power(g, rest) for g in G.generators])
    if P.order != pp:
        return None
    for g in G.generators:
        gi = inv(g)
        for x in P.generators:
            if not P.chain.sifts(mul(mul(gi, x), g)):
                return None
    return P


def _frattini_basis(P: Group, p: int) -> list[tuple]:
    seeds = [power(g, p) for g in P.generators]
    gs = P.generators
    seeds += [mul(mul(inv(a), inv(b)), mul(a, b)) for i, a in enumerate(gs) for b in gs[i + 1 :]]
    phi = normal_closure(P, seeds, within=P, check_seeds=False)
    basis = []
    cur = phi
    for g in P.generators:
        if cur.order == P.order:
            break
        if not cur.chain.sifts(g):
            cur = subgroup(P.degree, [g], base=cur, order=cur.order * p)
            basis.append(g)
    return basis


def abelianization_rank(G: Group, derived: Group | None = None) -> int:
    """``d(G/G')`` as the largest ``log_p |G / G' G^p|`` over primes p."""
    D = derived_subgroup(G) if derived is None else derived
    q = G.order // D.order
    best = 0
    for p in factorize(q):
        H = subgroup(G.degree, [power(g, p) for g in G.generators], base=D)
        best = max(best, round(math.log(G.order // H.order, p)))
    return best


def fast_paths(G: Group, opts: SolveOptions, stats: GenTestStats,
               rng: random.Random | None = None):
    """Generators for nilpotent groups, or a quick random hit; else ``None``."""
    rng = rng or random.Random(opts.seed)
    primes = sorted(factorize(G.order))
    sylows = []
    for p in primes:
        P = _sylow_if_normal(G, p)
        if P is None:
            break
        sylows.append((p, P))
    else:
        bases = [_frattini_basis(P, p) for p, P in sylows]
        d = max(len(b) for b in bases)
        out = []
        for i in range(d):
            x = G.identity
            for b in bases:
                if i < len(b):
                    x = mul(x, b[i])
            out.append(x)
        stats.per_factor.append(FactorRecord(index=0, order=G.order, abelian=True,
                                             branch="fast-nilpotent"))
        return out

    ell = max(2, abelianization_rank(G))
    state = LiftState(G, None, 0, [], stats, opts, rng)
    rec = FactorRecord(index=0, order=G.order, abelian=False, branch="fast-random")
    ss0, rss0 = stats.ss_tests, stats.rss_tests
    found = None
    for _ in range(opts.quick_attempts):
        rec.trials += 1
        cands = [_draw(G, rng, stats) for _ in range(ell)]
        if _rss(state, cands, None):
            found = cands
            break
    rec.ss_tests, rec.rss_tests = stats.ss_tests - ss0, stats.rss_tests - rss0
    if found is not None:
        stats.per_factor.append(rec)
    return found


# ---------------------------------------------------------------------------
# driver


def early_stop_check(state: LiftState) -> bool:
    """One RSS test of the current generators against G, SS-confirmed."""
    state.stats.early_stop_tests += 1
    if not _rss(state, state.gens, None):
        return False
    return _ss(state, state.gens, None)


def smallest_generating_set(G: Group, opts: SolveOptions | None = None):
    """Return ``(generators, stats)`` with ``<generators> = G``.

    In certified mode the number of generators is ``d(G)``.
    """
    opts = opts or SolveOptions()
    stats = GenTestStats()
    if G.order == 1:
        return [], stats
    rng = random.Random(opts.seed)
    gens = None
    if opts.enable_fast_paths:
        gens = fast_paths(G, opts, stats, rng)
    if gens is None:
        series = chief_series(G, opts.ordering, rng=random.Random(opts.seed))
        state = top_factor_generators(G, series, rng, stats, opts)
        while state.k >= 1:
            if opts.early_stop and early_stop_check(state):
                break
            k = state.k
            if series.factor(k).abelian:
                lift_abelian(state, k)
            else:
                lift_nonabelian(state, k)
            if state.d > series.u + 1 - state.k:
                raise InternalInconsistency(
                    f"{state.d} generators exceed the bound {series.u + 1 - state.k}"
                )
        gens = state.gens
    if not generates(gens, G, "SS", stats):
        raise InternalInconsistency("final verification of the generators failed")
    return gens, stats
