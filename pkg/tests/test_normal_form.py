from fractions import Fraction

import pytest
import sympy

from foliapair.errors import InsufficientOrderError, NonReducedError
from foliapair.germ import FoliationGerm
from foliapair.maps import Map2, same_foliation
from foliapair.normal_form import (
    NON_RESONANT, briot_bouquet_straighten, axes_coefficient, axes_germ, resonant_model,
    formal_normalize, kill_nonresonant_terms, normalize_oneform_1var, residue, resonance_data,
)
from foliapair.parser import parse_expression as P
from foliapair.scalar import I, ONE, ZERO, ExactScalar, sqrt_exact
from foliapair.series import Jet1, Jet2
from foliapair._sympy_bridge import scalar_to_sympy

U = sympy.Symbol("u")
GRID = [(p, q, k, a) for p, q in ((1, 1), (1, 2), (2, 3)) for k in (1, 2)
        for a in (ExactScalar(0), ExactScalar(1), I)]


def grid_id(c):
    p, q, k, a = c
    return f"p{p}q{q}k{k}a{a}"


def sympy_residue(f: Jet1):
    expr = sympy.Add(*[scalar_to_sympy(c) * U ** n for n, c in enumerate(f.coeffs) if c])
    return sympy.residue(1 / (U * expr), U, 0)


@pytest.mark.parametrize("f", [
    Jet1([0, 1, 0, 2], 6), Jet1([0, 0, 3, 1, 1], 8), Jet1([0, 2, I, 5], 6),
])
def test_residue_matches_sympy(f):
    assert scalar_to_sympy(residue(f)) == sympy_residue(f)


def test_resonance_data():
    assert resonance_data(ExactScalar(Fraction(-2, 3))) == ("rational-negative", 2, 3)
    assert resonance_data(ZERO) == ("zero", 0, 1)
    assert resonance_data(I)[0] == NON_RESONANT
    with pytest.raises(NonReducedError):
        resonance_data(ExactScalar(2))


@pytest.mark.parametrize("case", GRID, ids=grid_id)
def test_model_is_fixed(case):
    p, q, k, a = case
    N = 2 * k * q + 4
    res = formal_normalize(resonant_model(p, q, k, a, N), N)
    inv = res.invariants
    assert (inv.p, inv.q, inv.k, inv.alpha) == (p, q, k, a)
    assert res.transform.is_identity()
    assert res.oneform_residue() == -a / q


@pytest.mark.parametrize("case", GRID[::5], ids=grid_id)
def test_nonlinear_conjugate_keeps_invariants(case):
    p, q, k, a = case
    N = 2 * k * q + 4
    F = resonant_model(p, q, k, a, N)
    phi = Map2(Jet2({(1, 0): 2, (0, 2): 1}, N, True), Jet2({(0, 1): 1, (2, 0): 1, (1, 1): 1}, N, True))
    G = phi.pullback(F)
    res = formal_normalize(G, N)
    assert res.invariants.key() == formal_normalize(F, N).invariants.key()
    model = resonant_model(p, q, k, a, N)
    assert same_foliation(res.full_map.truncate(N).pullback(G), model, N - 1)


def test_linearizable_example():
    # x d/dx + (-y + x^2) d/dy is straightened by y -> y + x^2/3
    F = P("x*Dx + (-y + x^2)*Dy")
    res = formal_normalize(F, 10)
    assert res.invariants.linearizable
    assert res.straighten.Y.coeff(2, 0) == ExactScalar(Fraction(1, 3))


def test_first_resonant_term_survives():
    h = Jet2({(0, 0): -1, (1, 1): 1, (2, 2): 1}, 10, True)
    inv = formal_normalize(axes_germ(h), 10).invariants
    assert (inv.k, inv.alpha) == (1, ONE)


def test_saddle_node_model():
    F = resonant_model(0, 1, 2, 3, 10)
    inv = formal_normalize(F, 10).invariants
    assert (inv.lam, inv.k, inv.alpha) == (ZERO, 2, ExactScalar(3))


def test_irrational_is_linearizable():
    lam = ExactScalar(Fraction(7, 2)) + sqrt_exact(ExactScalar(5)) * Fraction(3, 2)
    h = Jet2({(0, 0): -lam, (1, 0): 1, (0, 1): 1}, 6, True)
    res = formal_normalize(axes_germ(h), 6)
    assert res.invariants.linearizable and res.invariants.lam_class == NON_RESONANT


def test_kill_stage_keeps_resonant_monomials():
    h = Jet2({(0, 0): -1, (1, 0): 1, (1, 1): 2}, 8, True)
    kr = kill_nonresonant_terms(h, 8, ExactScalar(-1))
    assert kr.residual[1] == ExactScalar(2)


def test_straighten_puts_separatrices_on_axes():
    F = P("(x - y^2)*dy + (y - x^2)*dx")
    G, S = briot_bouquet_straighten(F, 8)
    h = axes_coefficient(G)
    assert h.constant_term() == ExactScalar(-1)
    assert same_foliation(S.pullback(F), G, 7)


def test_one_variable_normalizer():
    f = Jet1([0, 2, 1, 5, 0, 0, 0], 6)
    phi, k, res = normalize_oneform_1var(f)
    assert k == 1
    assert res == residue(f)
    # u^2 phi' / (phi f(phi)) = 1/c + res u, i.e. phi^*(du/(u f)) = du/(c u^2) + res du/u
    n = phi.order - 1
    den = (phi.truncate(n) * f.compose(phi.truncate(n))).shift(-2)
    lhs = (phi.derivative().truncate(n - 2) * den.truncate(n - 2).unit_inverse())
    assert lhs == Jet1([f[1].inverse(), res], n - 2)


def test_non_reduced_rejected():
    with pytest.raises(NonReducedError):
        formal_normalize(P("x*dy - 2*y*dx"))


def test_order_too_small():
    with pytest.raises(InsufficientOrderError):
        formal_normalize(resonant_model(1, 1, 2, 0, 3), 3)


def test_map_inverse():
    phi = Map2(Jet2({(1, 0): 2, (0, 2): 1}, 8, True), Jet2({(0, 1): 1, (2, 0): 3}, 8, True))
    inv = phi.inverse(8)
    assert phi.compose(inv).truncate(8).is_identity(8)
    assert inv.compose(phi).truncate(8).is_identity(8)
