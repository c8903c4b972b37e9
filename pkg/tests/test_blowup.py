from fractions import Fraction

import pytest
import sympy

from foliapair.blowup import (
    CHART_X, CHART_Y, ReductionTree, blowup_curve, blowup_foliation, exceptional_ratio, normal_crossing_test,
    resolve_curve, singular_points_on_exceptional,
)
from foliapair.corpus import SEIDENBERG_GERMS
from foliapair.errors import DepthLimitError
from foliapair.germ import (
    NONDEGENERATE, NON_REDUCED, REDUCED_TAGS, REGULAR, RESONANT, SADDLE_NODE,
    Branch, DivisorGerm, FoliationGerm, linear_classify, separatrix_jets, tangency_divisor,
)
from foliapair.parser import parse_expression, parse_polynomial
from foliapair.scalar import ExactScalar, I
from foliapair.seidenberg import is_final, leaf_classes, reblow_reduced, seidenberg_reduce
from foliapair._sympy_bridge import X, Y, jet_to_sympy

T = sympy.Symbol("t")


def oracle_chart_lambda(lam, chart):
    """Eigenvalue ratio at the origin of a chart, by direct substitution."""
    lam = sympy.Rational(lam)
    x, y = X, Y
    if chart == CHART_X:
        sub = {x: x, y: T * x}
        dx_, dy_ = (1, 0), (T, x)  # coefficients of (dx, dt)
    else:
        sub = {x: T * y, y: y}
        dx_, dy_ = (y, T), (0, 1)  # coefficients of (dt, dy)
    a, b = -lam * y, x
    a, b = a.subs(sub, simultaneous=True), b.subs(sub, simultaneous=True)
    A = sympy.expand(a * dx_[0] + b * dy_[0])
    B = sympy.expand(a * dx_[1] + b * dy_[1])
    var = x if chart == CHART_X else y
    g = sympy.gcd(A, B)
    A, B = sympy.cancel(A / g), sympy.cancel(B / g)
    # form A d(first) + B d(second); dual field (-B, A)
    u, v = (var, T) if chart == CHART_X else (T, var)
    M = sympy.Matrix([[-sympy.diff(B, u), -sympy.diff(B, v)], [sympy.diff(A, u), sympy.diff(A, v)]])
    M = M.subs({u: 0, v: 0})
    along, across = (M[1, 1], M[0, 0]) if chart == CHART_X else (M[0, 0], M[1, 1])
    return along / across


@pytest.mark.parametrize("lam", [-3, Fraction(-1, 2), 2, 5])
def test_linear_blowup_matches_oracle(lam):
    F = FoliationGerm.linear(lam)
    for chart, expect in ((CHART_X, lam - 1), (CHART_Y, (1 - Fraction(lam)) / lam)):
        germ = blowup_foliation(F, chart).germ
        got = exceptional_ratio(germ, chart)
        assert got == ExactScalar(Fraction(expect))
        assert sympy.Rational(got.re) == oracle_chart_lambda(lam, chart)
        # the coordinate ratio is the same number or its inverse
        assert linear_classify(germ).lam in (got, got.inverse())


def test_radial_is_dicritical():
    res = blowup_foliation(FoliationGerm.linear(1), CHART_X)
    assert res.dicritical
    assert res.multiplicity == 2
    assert singular_points_on_exceptional(res) == []


def test_blowup_pullback_oracle():
    F = parse_expression("y^2*dy - x^3*dx")
    res = blowup_foliation(F, CHART_X)
    # total pullback under (x, t x), then divide by x^m
    a = jet_to_sympy(F.a).subs({Y: T * X}, simultaneous=True)
    b = jet_to_sympy(F.b).subs({Y: T * X}, simultaneous=True)
    A, B = sympy.expand(a + b * T), sympy.expand(b * X)
    m = res.multiplicity
    got_a = jet_to_sympy(res.germ.a).subs(Y, T)
    got_b = jet_to_sympy(res.germ.b).subs(Y, T)
    assert sympy.expand(A - X ** m * got_a) == 0
    assert sympy.expand(B - X ** m * got_b) == 0


@pytest.mark.parametrize("text,tag", [
    ("dy", REGULAR),
    ("x*dy + y*dx", NONDEGENERATE),
    ("x*dy - i*y*dx", NONDEGENERATE),
    ("x*dy + y*dx + x^2*y*dx", RESONANT),
    ("x^2*dy - y*dx", SADDLE_NODE),
    ("x*dy - 2*y*dx", NON_REDUCED),
    ("2*y*dy - 3*x^2*dx", NON_REDUCED),
])
def test_linear_classify(text, tag):
    assert linear_classify(parse_expression(text)).tag == tag


def test_tangency_of_linear_pair():
    div = tangency_divisor(FoliationGerm.linear(-1), FoliationGerm.linear(-2))
    assert div == DivisorGerm((Branch(parse_polynomial("x"), 1), Branch(parse_polynomial("y"), 1)))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_tangency_of_flat_pair(k):
    div = tangency_divisor(parse_expression("dy"), parse_expression(f"d(y + x^{k + 1})"))
    assert div == DivisorGerm((Branch(parse_polynomial("x"), k),))


def test_saddle_node_separatrices():
    seps = separatrix_jets(parse_expression("x^2*dy - y*dx"), 6)
    assert sorted(s.role for s in seps) == ["central", "strong"]


def test_curve_blowup_cusp():
    C = DivisorGerm((Branch(parse_polynomial("y^2 - x^3"), 1),))
    up = blowup_curve(C, CHART_X)
    eqs = {br.kind: br for br in up.branches}
    assert eqs["exceptional"].multiplicity == 2


def test_cusp_resolution():
    tree = resolve_curve(DivisorGerm((Branch(parse_polynomial("y^2 - x^3"), 1),)))
    assert tree.blowup_count() == 3
    assert tree.depth() == 3


def test_normal_crossing():
    assert normal_crossing_test(DivisorGerm((Branch(parse_polynomial("x*y"), 1),)))
    assert not normal_crossing_test(DivisorGerm((Branch(parse_polynomial("y^2 - x^3"), 1),)))


def test_tree_depth_limit():
    tree = ReductionTree(depth_limit=1)
    root = tree.add(None)
    child = tree.add(root, CHART_X, ExactScalar(0))
    with pytest.raises(DepthLimitError):
        tree.add(child, CHART_X, ExactScalar(0))


def test_seidenberg_trivial_and_cusp():
    assert seidenberg_reduce(parse_expression("x*dy + y*dx")).depth() == 0
    tree = seidenberg_reduce(parse_expression("2*y*dy - 3*x^2*dx"))
    assert tree.blowup_count() == 3
    lams = sorted(str(c.lam) for c in leaf_classes(tree))
    assert lams == ["-1/3", "-2", "-6"]


def test_seidenberg_depth_limit():
    with pytest.raises(DepthLimitError):
        seidenberg_reduce(parse_expression("y^3*dx - x^4*dy"), depth_limit=2)


@pytest.mark.parametrize("text", SEIDENBERG_GERMS)
def test_seidenberg_corpus(text):
    tree = seidenberg_reduce(parse_expression(text))
    for leaf in tree.leaves():
        germ = leaf.data["germ"]
        assert is_final(germ)
        assert linear_classify(germ).tag in REDUCED_TAGS or not germ.is_singular()
        assert reblow_reduced(germ)


def test_dot_output():
    tree = seidenberg_reduce(parse_expression("2*y*dy - 3*x^2*dx"))
    dot = tree.to_dot()
    assert dot.startswith("digraph reduction {")
    assert dot.count("->") == len(tree.nodes) - 1
