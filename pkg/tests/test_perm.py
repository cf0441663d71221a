import itertools

import pytest
from hypothesis import given

from permgen.perm import (
    CycleSyntaxError,
    DegreeMismatch,
    Permutation,
    PointOutOfRange,
    RepeatedPointInCycle,
    compose,
    element_order,
    identity,
    inverse,
    parse_cycles,
    print_cycles,
)

from strategies import perm_triples, perms


def test_parse_disjoint_cycles():
    assert parse_cycles("(1 2 3)(4 5)", 5).images == (2, 3, 1, 5, 4)


@pytest.mark.parametrize("text", ["()", "", "   "])
def test_parse_identity(text):
    assert parse_cycles(text, 4).images == (1, 2, 3, 4)


def test_parse_overlapping_cycles_left_to_right():
    # 1 -> 2 -> 2, 2 -> 1 -> 3, 3 -> 3 -> 1
    assert parse_cycles("(1 2)(1 3)", 3).images == (2, 3, 1)


def test_parse_accepts_commas_and_spaces():
    assert parse_cycles(" ( 1, 2 ,3 ) ", 3) == parse_cycles("(1 2 3)", 3)


def test_parse_errors():
    with pytest.raises(PointOutOfRange):
        parse_cycles("(1 6)", 5)
    with pytest.raises(PointOutOfRange):
        parse_cycles("(0 1)", 5)
    with pytest.raises(RepeatedPointInCycle):
        parse_cycles("(1 2 1)", 5)
    with pytest.raises(CycleSyntaxError) as e:
        parse_cycles("(1 2", 5)
    assert e.value.pos == 4
    with pytest.raises(CycleSyntaxError) as e:
        parse_cycles("(1 2) x", 5)
    assert e.value.pos == 6
    with pytest.raises(CycleSyntaxError):
        parse_cycles("(1 a)", 5)


def test_compose_examples():
    a = parse_cycles("(1 2)", 3)
    b = parse_cycles("(1 3)", 3)
    assert compose(a, b) == parse_cycles("(1 2 3)", 3)
    assert a * b == compose(a, b)
    assert compose(a, identity(3)) == a
    assert compose(a, inverse(a)) == identity(3)


def test_compose_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        compose(identity(3), identity(4))


def test_inverse_and_order_examples():
    assert element_order(parse_cycles("(1 2 3)(4 5)", 5)) == 6
    assert inverse(parse_cycles("(1 2 3)", 3)) == parse_cycles("(1 3 2)", 3)
    assert element_order(identity(4)) == 1


def test_call_is_one_based():
    p = parse_cycles("(1 2 3)", 3)
    assert p(1) == 2 and p(3) == 1
    with pytest.raises(PointOutOfRange):
        p(4)


def test_print_cycles():
    assert print_cycles(parse_cycles("(3 1 2)(5 4)", 5)) == "(1 2 3)(4 5)"
    assert print_cycles(identity(3)) == "()"
    assert str(parse_cycles("(2 4)", 4)) == "(2 4)"


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


@given(perm_triples())
def test_associativity(t):
    a, b, c = t
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(perms())
def test_inverse_laws(a):
    e = identity(a.degree)
    assert compose(a, inverse(a)) == e
    assert compose(inverse(a), a) == e
    assert inverse(inverse(a)) == a


@given(perms())
def test_print_parse_round_trip(a):
    assert parse_cycles(print_cycles(a), a.degree) == a


@given(perms())
def test_power_matches_repeated_compose(a):
    x = identity(a.degree)
    for k in range(5):
        assert a**k == x
        x = compose(x, a)
    assert a**-1 == inverse(a)


@pytest.mark.parametrize("n", range(1, 9))
def test_element_order_exhaustive(n):
    e = identity(n)
    for images in itertools.permutations(range(n)):
        a = Permutation(images)
        m, x = 1, a
        while x != e:
            x = compose(x, a)
            m += 1
        assert element_order(a) == m
