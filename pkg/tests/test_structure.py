import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permgen.bsgs import Group
from permgen.constructions import alt, build, sym
from permgen.oracle import verify_chief_series
from permgen.perm import parse_cycles
from permgen.structure import (
    ABELIAN_HIGH,
    AS_FOUND,
    LayerNotElementaryAbelian,
    LayerNotNormal,
    SeedNotInGroup,
    canonical_coset_rep,
    chief_series,
    coset_representatives,
    delta_prime,
    derived_series,
    derived_subgroup,
    is_normal,
    kernel_series,
    minimal_block_system,
    normal_closure,
    refine_abelian_layer,
    subgroup,
    t_prime,
    trivial_group,
)

from battery import BATTERY


def P(text, n):
    return parse_cycles(text, n)


def affine_3_2():
    """Translations of F_3^2 extended by (a, b) -> (b, a + b), on 9 points."""
    pt = lambda a, b: 3 * (a % 3) + (b % 3)  # noqa: E731
    t1 = tuple(pt(a + 1, b) for a in range(3) for b in range(3))
    t2 = tuple(pt(a, b + 1) for a in range(3) for b in range(3))
    m = tuple(pt(b, a + b) for a in range(3) for b in range(3))
    return Group([t1, t2, m], 9), Group([t1, t2], 9)


# -- normal closure and derived series ---------------------------------------


def test_normal_closure_examples():
    A4 = alt(4)
    assert normal_closure(A4, [P("(1 2)(3 4)", 4)]).order == 4
    assert normal_closure(A4, [A4.identity]).order == 1
    assert normal_closure(sym(4), [P("(1 2)", 4)]).order == 24


def test_normal_closure_rejects_outside_seed():
    with pytest.raises(SeedNotInGroup):
        normal_closure(alt(4), [P("(1 2)", 4)])


def test_derived_examples():
    assert derived_subgroup(sym(4)).order == 12
    assert derived_subgroup(build("direct_product(cyclic(4), cyclic(6))")).order == 1
    assert derived_subgroup(alt(5)).order == 60


def test_derived_series_sym4():
    assert [H.order for H in derived_series(sym(4))] == [24, 12, 4, 1]
    assert [H.order for H in derived_series(build("sym(5)"))] == [120, 60]


@pytest.mark.parametrize("spec", BATTERY[:25])
def test_normal_closures_are_normal(spec):
    G = build(spec)
    rng = random.Random(5)
    for _ in range(3):
        N = normal_closure(G, [G.random_element(rng)])
        assert is_normal(G, N)
        assert G.order % N.order == 0


# -- kernels and blocks ---------------------------------------------------------


def test_kernel_series_a5_squared():
    G = build("direct_power(alt(5), 2)")
    ks = kernel_series(G)
    assert [H.order for H in ks] == [3600, 60, 1]
    # the middle term fixes the first orbit pointwise
    assert all(g[i] == i for g in ks[1].generators for i in range(5))
    assert all(is_normal(G, H) for H in ks)


@pytest.mark.parametrize("spec", ["alt(5)", "sym(6)", "psl_3_2", "cyclic(7)"])
def test_kernel_series_primitive(spec):
    G = build(spec)
    assert [H.order for H in kernel_series(G)] == [G.order, 1]


def test_kernel_series_crown():
    G = build("crown_inversion(3, 2)")
    assert [H.order for H in kernel_series(G)] == [18, 3, 1]


def test_kernel_series_uses_blocks():
    G = build("wreath(sym(3), sym(3))")
    orders = [H.order for H in kernel_series(G)]
    assert orders[0] == 1296 and orders[1] == 216 and orders[-1] == 1


def test_minimal_block_system():
    G = build("wreath(cyclic(2), cyclic(3))")
    blocks = minimal_block_system(G.generators, list(range(6)))
    assert blocks is not None and all(len(b) == 2 for b in blocks)
    assert minimal_block_system(sym(5).generators, list(range(5))) is None


# -- abelian layers -------------------------------------------------------------


def test_refine_klein_layer_in_alt4():
    A4 = alt(4)
    V = normal_closure(A4, [P("(1 2)(3 4)", 4)])
    out = refine_abelian_layer(A4, V, trivial_group(4))
    assert [H.order for H in out] == [4]


def test_refine_crown_layer_splits():
    G = build("crown_inversion(3, 2)")
    layer = subgroup(6, [P("(1 2 3)", 6), P("(4 5 6)", 6)])
    out = refine_abelian_layer(G, layer, trivial_group(6))
    assert [H.order for H in out] == [3, 9]
    assert all(is_normal(G, H) for H in out)


def test_refine_irreducible_plane():
    G, T = affine_3_2()
    assert is_normal(G, T) and T.order == 9
    out = refine_abelian_layer(G, T, trivial_group(9))
    assert [H.order for H in out] == [9]


def test_refine_layer_errors():
    C4 = build("cyclic(4)")
    with pytest.raises(LayerNotElementaryAbelian):
        refine_abelian_layer(C4, C4, trivial_group(4))
    S3 = sym(3)
    with pytest.raises(LayerNotNormal):
        refine_abelian_layer(S3, Group([P("(1 2)", 3)], 3), trivial_group(3))


# -- chief series --------------------------------------------------------------


def test_chief_series_examples():
    assert chief_series(sym(4)).factor_orders() == [4, 3, 2]
    assert chief_series(build("direct_power(alt(5), 2)")).factor_orders() == [60, 60]
    assert sorted(chief_series(build("cyclic(6)")).factor_orders()) == [2, 3]


def test_chief_factor_metadata():
    cs = chief_series(build("direct_product(sym(4), alt(5))"))
    for f in cs.factors:
        if f.abelian:
            assert f.p ** f.l == f.order
        else:
            assert f.order >= 60 and f.p is None
        assert f.delta_prime >= 1 and f.t_prime >= 2


def test_abelian_high_puts_perfect_part_low():
    G = build("direct_product(sym(4), alt(5))")
    high = chief_series(G, ABELIAN_HIGH).factor_orders()
    assert high[0] == 60
    assert sorted(high) == sorted(chief_series(G, AS_FOUND).factor_orders())


@pytest.mark.parametrize("spec", BATTERY)
def test_chief_series_verified_by_oracle(spec):
    G = build(spec)
    for ordering in (ABELIAN_HIGH, AS_FOUND):
        cs = chief_series(G, ordering)
        assert verify_chief_series(G, cs)
        prod = 1
        for f in cs.factors:
            prod *= f.order
        assert prod == G.order
        assert cs.u <= max(G.degree - 1, 1)


CORPUS = BATTERY + [
    "direct_power(alt(5), 3)", "wreath(sym(3), sym(3))", "direct_power(sym(4), 3)",
    "wreath(alt(5), cyclic(2))", "crown_inversion(3, 8)", "direct_power(psl_3_2, 2)",
    "direct_product(psl_3_2, sym(4))",
]


@pytest.mark.parametrize("spec", CORPUS)
def test_factor_multiset_invariant(spec):
    G = build(spec)
    ref = Counter(chief_series(G).factor_orders())
    for ordering in (ABELIAN_HIGH, AS_FOUND):
        for seed in (1, 2):
            cs = chief_series(G, ordering, rng=random.Random(seed))
            assert Counter(cs.factor_orders()) == ref
            assert all(is_normal(G, H) for H in cs.subgroups)
            assert cs.u <= max(G.degree - 1, 1)


def test_oracle_rejects_skipped_factor():
    S4 = sym(4)
    cs = chief_series(S4)
    assert verify_chief_series(S4, cs)
    assert not verify_chief_series(S4, [cs.subgroups[0], cs.subgroups[2], cs.subgroups[3]])
    assert verify_chief_series(alt(5), [trivial_group(5), alt(5)])


# -- delta' and t' ---------------------------------------------------------------


def test_delta_prime_examples():
    cs = chief_series(build("direct_power(alt(5), 3)"))
    assert cs.factor_orders() == [60, 60, 60]
    assert delta_prime(cs, 1) == 3
    assert delta_prime(cs, 3) == 1
    s4 = chief_series(sym(4))
    assert delta_prime(s4, 1) == 1
    with pytest.raises(IndexError):
        delta_prime(s4, 4)
    with pytest.raises(IndexError):
        s4.factor(0)


def test_t_prime_examples():
    assert t_prime(60, 1) == 2
    assert t_prime(60, 3) == 2
    assert t_prime(60, 20) == 3


def test_t_prime_exact_ties():
    # 8/5 + log_N(delta) is an integer exactly when N**(5m-8) == delta**5
    assert t_prime(2**5, 2**2) == 2
    assert t_prime(2**5, 2**2 + 1) == 3
    assert t_prime(3**5, 3**7) == 3


@given(st.integers(2, 10**6), st.integers(1, 10**6))
def test_t_prime_matches_definition(order, dp):
    m = t_prime(order, dp)
    assert m >= 2
    assert order ** (5 * m - 8) >= dp**5
    assert m == 2 or order ** (5 * (m - 1) - 8) < dp**5


# -- coset representatives ------------------------------------------------------


@settings(max_examples=30)
@given(st.integers(0, 2**32))
def test_canonical_coset_rep_is_class_invariant(seed):
    G = build("direct_product(sym(4), sym(3))")
    M = normal_closure(G, [P("(1 2)(3 4)", 7)])
    rng = random.Random(seed)
    x = G.random_element(rng)
    m = M.random_element(rng)
    from permgen.perm import mul

    assert canonical_coset_rep(M.chain, x) == canonical_coset_rep(M.chain, mul(m, x))


def test_coset_representatives_count():
    G = build("direct_power(alt(5), 2)")
    M = kernel_series(G)[1]
    reps = coset_representatives(G, M)
    assert len(reps) == 60 and len(set(reps)) == 60
