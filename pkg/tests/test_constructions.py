import pytest
from hypothesis import given
from hypothesis import strategies as st

from permgen.constructions import (
    BadGenerators,
    GroupFileNotFound,
    GroupSpec,
    SpecSyntaxError,
    build,
    format_spec,
    parse_spec,
    read_group_file,
)

from battery import BATTERY


@pytest.mark.parametrize(
    "spec, degree, order",
    [
        ("sym(5)", 5, 120),
        ("alt(6)", 6, 360),
        ("cyclic(12)", 12, 12),
        ("dihedral(5)", 5, 10),
        ("psl_3_2", 7, 168),
        ("q8", 8, 8),
        ("direct_power(alt(5), 19)", 95, 60**19),
        ("direct_power(alt(5), 20)", 100, 60**20),
        ("crown_inversion(3, 30)", 90, 2 * 3**30),
        ("crown_inversion(5, 2)", 10, 50),
        ("direct_power(psl_3_2, 2)", 14, 168**2),
        ("wreath(cyclic(3), sym(2))", 6, 18),
        ("wreath(sym(3), sym(3))", 9, 6**3 * 6),
        ("direct_product(alt(5), cyclic(2))", 7, 120),
        ('gens(4, "(1 2 3 4)", "(1 2)")', 4, 24),
    ],
)
def test_degrees_and_orders(spec, degree, order):
    G = build(spec)
    assert G.degree == degree
    assert G.order == order


def test_q8_is_quaternion():
    G = build("q8")
    from permgen.perm import element_order

    orders = sorted(element_order(g) for g in G.chain.elements())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]


@pytest.mark.parametrize("a, b", [("sym(3)", "cyclic(4)"), ("alt(4)", "dihedral(4)"), ("q8", "cyclic(2)")])
def test_direct_product_multiplies(a, b):
    A, B = build(a), build(b)
    P = build(f"direct_product({a}, {b})")
    assert P.order == A.order * B.order
    assert P.degree == A.degree + B.degree


@pytest.mark.parametrize("g, h", [("cyclic(2)", "cyclic(3)"), ("sym(3)", "cyclic(2)"), ("cyclic(3)", "alt(4)")])
def test_wreath_order(g, h):
    G, H = build(g), build(h)
    W = build(f"wreath({g}, {h})")
    assert W.degree == G.degree * H.degree
    assert W.order == G.order**H.degree * H.order


@pytest.mark.parametrize("spec", BATTERY)
def test_battery_round_trips(spec):
    G = build(spec)
    assert build(G.name).order == G.order
    assert format_spec(parse_spec(G.name)) == G.name


@given(st.recursive(
    st.builds(GroupSpec, st.sampled_from(["sym", "alt", "cyclic"]),
              st.tuples(st.integers(1, 9))),
    lambda inner: st.builds(GroupSpec, st.sampled_from(["direct_product", "wreath"]),
                            st.tuples(inner, inner)),
    max_leaves=5,
))
def test_parse_format_round_trip(spec):
    assert parse_spec(format_spec(spec)) == spec


def test_whitespace_and_strings():
    assert parse_spec(" direct_power ( alt( 5 ) ,20 ) ") == GroupSpec(
        "direct_power", (GroupSpec("alt", (5,)), 20))
    spec = parse_spec(r'file("a\"b.txt")')
    assert spec.args == ('a"b.txt',)
    assert parse_spec(format_spec(spec)) == spec


@pytest.mark.parametrize("text, pos", [("alt(5", 5), ("alt(5))", 6), ("(5)", 0), ('file("x', 5), ("", 0)])
def test_syntax_errors_are_positioned(text, pos):
    with pytest.raises(SpecSyntaxError) as err:
        parse_spec(text)
    assert err.value.pos == pos


@pytest.mark.parametrize("text", [
    "frobnicate(3)", "alt(x)", "direct_power(alt(5))", 'gens(3, "(1 4)")',
    "crown_inversion(2, 3)", "dihedral(2)",
])
def test_bad_generators(text):
    with pytest.raises((BadGenerators, ValueError)):
        build(text)


def test_group_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# a group\ndegree 5\n(1 2 3 4 5)  # rotation\n\n(1 2)\n")
    G = read_group_file(str(path))
    assert G.degree == 5 and G.order == 120
    assert build(f'file("{path}")').order == 120


def test_group_file_errors(tmp_path):
    with pytest.raises(GroupFileNotFound):
        build('file("/nonexistent/group.txt")')
    bad = tmp_path / "bad.txt"
    bad.write_text("degree 3\n(1 7)\n")
    with pytest.raises(BadGenerators):
        read_group_file(str(bad))
    nodeg = tmp_path / "nodeg.txt"
    nodeg.write_text("(1 2)\n")
    with pytest.raises(BadGenerators):
        read_group_file(str(nodeg))


@pytest.mark.parametrize("spec", ["psl_3_2", "wreath(sym(3), sym(3))", "crown_inversion(3, 6)",
                                  "direct_product(q8, alt(5))"])
def test_orders_against_sympy(spec):
    combinatorics = pytest.importorskip("sympy.combinatorics")
    G = build(spec)
    sg = combinatorics.PermutationGroup([combinatorics.Permutation(list(g)) for g in G.generators])
    assert sg.order() == G.order
