import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permgen.bsgs import GenTestStats, generates
from permgen.constructions import build, sym
from permgen.mingen import (
    CAP_ENV,
    CERTIFIED,
    HEURISTIC,
    ExhaustiveCapExceeded,
    LiftState,
    SolveOptions,
    abelianization_rank,
    default_cap,
    early_stop_check,
    exhaustive_search,
    fast_paths,
    lift_abelian,
    lift_nonabelian,
    sampling_budget,
    smallest_generating_set,
    top_factor_generators,
)
from permgen.oracle import oracle_min_gen
from permgen.structure import chief_series, trivial_group

from battery import BATTERY


def solve(spec, **kw):
    G = build(spec)
    gens, stats = smallest_generating_set(G, SolveOptions(**kw))
    assert generates(gens, G, "SS")
    return gens, stats


def branches(stats):
    return [r.branch for r in stats.per_factor]


@pytest.mark.parametrize("spec, d", [
    ("sym(4)", 2),
    ("cyclic(12)", 1),
    ("alt(5)", 2),
    ("direct_power(alt(5), 19)", 2),
    ("direct_power(psl_3_2, 2)", 2),
    ("wreath(sym(3), sym(3))", 2),
])
def test_solve_examples(spec, d):
    for fast in (True, False):
        gens, _ = solve(spec, enable_fast_paths=fast)
        assert len(gens) == d


def test_trivial_group():
    gens, stats = smallest_generating_set(trivial_group(4))
    assert gens == [] and stats.total_tests == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_crown_small_against_oracle(k):
    G = build(f"crown_inversion(3, {k})")
    assert oracle_min_gen(G) == k + 1
    gens, _ = smallest_generating_set(G, SolveOptions(seed=k))
    assert len(gens) == k + 1


@pytest.mark.parametrize("k", [4, 6, 9])
def test_crown_pattern(k):
    gens, _ = solve(f"crown_inversion(3, {k})", seed=k, enable_fast_paths=False)
    assert len(gens) == k + 1


# -- fast paths ----------------------------------------------------------------


@pytest.mark.parametrize("spec, d", [
    ("cyclic(8)", 1),
    ("q8", 2),
    ("direct_product(cyclic(2), cyclic(4))", 2),
    ("direct_product(cyclic(4), cyclic(9))", 1),
    ("direct_power(cyclic(3), 3)", 3),
    ("direct_product(q8, cyclic(3))", 2),
])
def test_nilpotent_fast_path(spec, d):
    gens, stats = solve(spec)
    assert len(gens) == d
    assert branches(stats) == ["fast-nilpotent"]


def test_random_fast_path_is_optional():
    G = build("alt(5)")
    stats = GenTestStats()
    got = fast_paths(G, SolveOptions(seed=3), stats, random.Random(3))
    assert got is None or (len(got) == 2 and generates(got, G, "SS"))
    none = fast_paths(G, SolveOptions(seed=3, quick_attempts=0), GenTestStats(), random.Random(3))
    assert none is None


@pytest.mark.parametrize("spec, r", [
    ("sym(4)", 1), ("alt(5)", 0), ("direct_power(cyclic(2), 3)", 3),
    ("direct_product(sym(3), cyclic(6))", 2),
])
def test_abelianization_rank(spec, r):
    assert abelianization_rank(build(spec)) == r


# -- budget and options ---------------------------------------------------------


def test_sampling_budget():
    assert sampling_budget(2, 20, 60) == 279
    assert sampling_budget(1, 1, 60) == 7


def test_options_validation():
    with pytest.raises(ValueError):
        SolveOptions(mode="fast")
    with pytest.raises(ValueError):
        SolveOptions(exhaustive_cap=0)
    with pytest.raises(ValueError):
        SolveOptions(rss_epsilon=1.5)
    assert SolveOptions().mode == CERTIFIED


def test_cap_env(monkeypatch):
    monkeypatch.setenv(CAP_ENV, "123")
    assert default_cap() == 123
    assert SolveOptions().exhaustive_cap == 123
    monkeypatch.setenv(CAP_ENV, "lots")
    with pytest.raises(ValueError):
        default_cap()
    monkeypatch.delenv(CAP_ENV)
    assert default_cap() == 10**7


@pytest.mark.slow
def test_cap_certified_and_heuristic():
    spec = "direct_power(alt(5), 20)"
    with pytest.raises(ExhaustiveCapExceeded):
        solve(spec, seed=1, exhaustive_cap=100)
    gens, stats = solve(spec, seed=1, exhaustive_cap=100, mode=HEURISTIC)
    assert len(gens) == 3
    assert stats.certified_minimal is False


def test_exhaustive_cap_direct():
    G = build("direct_power(alt(5), 2)")
    series = chief_series(G)
    state = top_factor_generators(G, series, random.Random(0), GenTestStats(),
                                  SolveOptions(exhaustive_cap=59))
    with pytest.raises(ExhaustiveCapExceeded):
        exhaustive_search(state, 1)


# -- lifting steps --------------------------------------------------------------


def descend(G, seed, check):
    """Run the lifting loop by hand, calling ``check(state)`` at each boundary."""
    opts = SolveOptions(seed=seed, enable_fast_paths=False)
    series = chief_series(G)
    rng = random.Random(seed)
    state = top_factor_generators(G, series, rng, GenTestStats(), opts)
    check(state)
    while state.k >= 1:
        if series.factor(state.k).abelian:
            lift_abelian(state, state.k)
        else:
            lift_nonabelian(state, state.k)
        check(state)
    return state


def boundary_invariants(state):
    series = state.series
    Nk = series.subgroups[state.k]
    assert generates(list(state.gens) + list(Nk.generators), state.G, "SS")
    assert state.d <= series.u + 1 - state.k


@settings(max_examples=40)
@given(st.sampled_from(BATTERY), st.integers(0, 2**32))
def test_lifting_invariants(spec, seed):
    G = build(spec)
    descend(G, seed, boundary_invariants)


def test_abelian_append_builds_elementary_abelian():
    G = build("direct_power(cyclic(2), 4)")
    state = descend(G, 0, boundary_invariants)
    assert state.d == 4
    assert branches(state.stats).count("abelian-append") == 3


def test_sym4_klein_layer_keeps_two():
    _, stats = solve("sym(4)", enable_fast_paths=False, early_stop=False)
    assert branches(stats)[0] == "top-abelian"
    assert "abelian-append" in branches(stats)
    assert len(stats.per_factor) == 3


def test_crown_first_abelian_factor_appends():
    _, stats = solve("crown_inversion(3, 2)", enable_fast_paths=False, early_stop=False)
    assert branches(stats) == ["top-abelian", "abelian-append", "abelian-append"]


def test_pair_branch_from_single_generator():
    _, stats = solve("direct_product(alt(5), cyclic(2))", enable_fast_paths=False,
                     ordering="as_found", seed=4)
    got = branches(stats)
    assert got[0] in ("top-abelian", "top-nonabelian")
    if got[0] == "top-abelian":
        assert got[1] == "nonabelian-pair"


def test_exhaustive_orbit_reduction_agrees():
    G = build("direct_power(alt(5), 2)")
    series = chief_series(G)
    for seed in range(4):
        base = top_factor_generators(G, series, random.Random(seed), GenTestStats())
        full = LiftState(G, series, 1, list(base.gens), GenTestStats(), base.opts, base.rng)
        red = LiftState(G, series, 1, list(base.gens), GenTestStats(), base.opts, base.rng)
        a = exhaustive_search(full, 1, orbit_reduce=False)
        b = exhaustive_search(red, 1, orbit_reduce=True)
        assert (a is None) == (b is None)
        assert red.stats.ss_tests <= full.stats.ss_tests


# -- early stop and determinism ---------------------------------------------------


def test_early_stop_counts_one_test_per_factor():
    _, stats = solve("direct_power(alt(5), 3)", enable_fast_paths=False)
    lifts = len(stats.per_factor) - 1
    assert stats.early_stop_tests in (lifts, lifts + 1)


def test_early_stop_halts_descent():
    G = build("direct_product(sym(4), cyclic(3))")
    _, stats = smallest_generating_set(G, SolveOptions(enable_fast_paths=False))
    series = chief_series(G)
    assert len(stats.per_factor) <= series.u
    assert stats.early_stop_tests == len(stats.per_factor)


def test_early_stop_false_on_partial_generators():
    G = sym(4)
    series = chief_series(G)
    state = top_factor_generators(G, series, random.Random(0), GenTestStats())
    assert early_stop_check(state) is False
    assert state.stats.early_stop_tests == 1


@pytest.mark.parametrize("spec", ["sym(4)", "direct_power(alt(5), 3)", "crown_inversion(3, 3)",
                                  "wreath(cyclic(2), sym(3))"])
def test_size_is_seed_independent(spec):
    sizes = {len(solve(spec, seed=s, enable_fast_paths=s % 2 == 0)[0]) for s in range(20)}
    assert len(sizes) == 1


def test_deterministic_given_seed():
    a = solve("direct_power(alt(5), 4)", seed=9)
    b = solve("direct_power(alt(5), 4)", seed=9)
    assert a[0] == b[0]
    assert a[1].as_dict() == b[1].as_dict()
