import pytest

from foliapair.corpus import OPPOSITE_SADDLE_NODES, PAIRS
from foliapair.errors import ClassificationError, IdenticalFoliationsError, PreconditionError
from foliapair.germ import SADDLE_NODE, FoliationGerm, linear_classify
from foliapair.pairs import (
    PAIR_TAGS, PairType, classify_pair_point, leaf_jet, local_gamma, pair_reduce,
    smooth_branch_jet, tangency_contained, trichotomy_holds,
)
from foliapair.parser import parse_expression as P, parse_polynomial


@pytest.mark.parametrize("a,b,tags", PAIRS, ids=[f"{a} | {b}" for a, b, _ in PAIRS])
def test_pair_corpus(a, b, tags):
    rep = pair_reduce(P(a), P(b))
    assert tuple(rep.tags()) == tags
    for leaf in rep.tree.leaves():
        lp = leaf.data["local"]
        assert trichotomy_holds(lp)
        assert tangency_contained(lp)


def test_all_tags_covered():
    seen = {t for _, _, tags in PAIRS for t in tags}
    assert seen == set(PAIR_TAGS)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_flat_model_k(k):
    t = classify_pair_point(P("dy"), P(f"d(y + x^{k + 1})"))
    assert t == PairType("T2", k=k)


def test_normal_crossing_model():
    t = classify_pair_point(P("dy"), P("d(y + x^3*y^2)"))
    assert (t.tag, t.k, t.l) == ("T4", 2, 2)


def test_reduced_tangency_flag():
    t = classify_pair_point(FoliationGerm.linear(-1), FoliationGerm.linear(-2))
    assert t.tag == "T6" and t.reduced_tangency


def test_opposite_saddle_nodes_extra_blowup():
    rep = pair_reduce(*(P(s) for s in OPPOSITE_SADDLE_NODES))
    assert rep.extra_blowups == [0]
    for leaf in rep.tree.leaves():
        tags = [linear_classify(g).tag for g in leaf.data["germs"]]
        assert tags.count(SADDLE_NODE) <= 1


def test_same_orientation_saddle_nodes_need_nothing():
    rep = pair_reduce(P("x*dy - y^2*dx"), P("x*dy + y*dx"))
    assert rep.depth == 0 and rep.extra_blowups == []


def test_unreduced_point_is_rejected():
    with pytest.raises(ClassificationError):
        classify_pair_point(P("dy"), P("2*y*dy - 3*x^2*dx"))


def test_identical_foliations_rejected():
    with pytest.raises(IdenticalFoliationsError):
        pair_reduce(P("x*dy + y*dx"), P("2*x*dy + 2*y*dx"))


def test_inexact_input_rejected():
    F = P("dy").truncated(5)
    with pytest.raises(PreconditionError):
        pair_reduce(F, P("dx"))


def test_leaf_and_branch_jets():
    leaf = leaf_jet(P("d(y - x^2)"), 6)
    assert leaf.param == "y" and leaf.s[2] == 1  # y = x^2
    br = smooth_branch_jet(parse_polynomial("x - y^3"), 6)
    assert br.param == "x" and br.s[3] == 1  # x = y^3


def test_gamma_ownership():
    lp = local_gamma(P("dy"), P("d(y + x*y^2)"), 8)
    owners = sorted(sorted(g.owners) for g in lp.gamma)
    assert ["G1", "G2", "T"] in owners
