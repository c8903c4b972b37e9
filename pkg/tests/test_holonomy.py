from fractions import Fraction

import pytest
import sympy

from foliapair.errors import (
    InsufficientOrderError, NotASymmetryError, NotAxisPreservingError, PreconditionError,
)
from foliapair.germ import FoliationGerm
from foliapair.holonomy import (
    DiffeoGerm1, MultiplierDescriptor, compose_pair_conjugacy, diffeo_formal_invariants,
    exp_flow_jet, formal_conjugacy_decide, holonomy_jet, kill_intermediate,
    symmetry_structure_check, verify_pair_conjugacy,
)
from foliapair.maps import Map2, same_foliation
from foliapair.normal_form import RATIONAL_NEGATIVE, NormalFormInvariants, axes_germ, resonant_model
from foliapair.scalar import I, ONE, ZERO, ExactScalar, as_scalar
from foliapair.series import Jet1, Jet2
from foliapair.tau import Tau

Z, S, T = sympy.symbols("z s t")


def picard_flow(v_coeffs, order):
    """Time-one flow of z' = v(z) by Picard iteration in sympy, truncated in z."""
    v = lambda w: sum(sympy.Rational(c) * w ** n for n, c in enumerate(v_coeffs))
    w = Z
    for _ in range(order):
        integrand = sympy.expand(v(w.subs(T, S)))
        integrand = sum(integrand.coeff(Z, n) * Z ** n for n in range(order + 1))
        w = Z + sympy.integrate(integrand, (S, 0, T))
    w = sympy.expand(w.subs(T, 1))
    return [w.coeff(Z, n) for n in range(order + 1)]


def scalars(germ):
    return [c.scalar() for c in germ.jet.coeffs]


def test_flow_of_z_squared_is_z_over_one_minus_z():
    phi = exp_flow_jet(Jet1([0, 0, 1], 10))
    assert scalars(phi) == [ZERO] + [ONE] * 10


@pytest.mark.parametrize("v", [[0, 0, 1], [0, 0, 0, 1, 0, 1], [0, 0, 2, 1]])
def test_flow_matches_picard(v):
    N = 8
    got = [sympy.Rational(c.re) for c in scalars(exp_flow_jet(Jet1(v, N)))]
    assert got == picard_flow(v, N)


@pytest.mark.parametrize("v", [[0, 0, 1], [0, 0, 0, 1, 0, 1]])
def test_flow_group_law(v):
    N = 12
    vj = Jet1(v, N)
    s, t = Fraction(1, 3), Fraction(2, 3)
    a = exp_flow_jet(Jet1([c * s for c in vj.coeffs]))
    b = exp_flow_jet(Jet1([c * t for c in vj.coeffs]))
    assert a.compose(b) == exp_flow_jet(vj)


def test_flow_rejects_linear_part():
    with pytest.raises(PreconditionError):
        exp_flow_jet(Jet1([0, 1], 5))
    assert exp_flow_jet(Jet1([0], 5)).is_identity()


def test_tau_arithmetic():
    tau = Tau.tau()
    assert tau * tau.inverse() == Tau.const(1)
    assert (tau + 1) * (tau - 1) == tau * tau - 1
    with pytest.raises(ZeroDivisionError):
        (tau + 1).inverse()


def test_linear_holonomy_is_descriptor_only():
    inv = NormalFormInvariants(ExactScalar(-2), RATIONAL_NEGATIVE, 2, 1, linearizable=True)
    hol = holonomy_jet(inv, 6)
    assert hol.descriptor == MultiplierDescriptor(0, 1)
    assert hol.iterate.is_identity()
    inv = NormalFormInvariants(I, "non-resonant", linearizable=True)
    assert holonomy_jet(inv, 6).descriptor.lam == I


def test_iterate_expansion_half():
    # p/q = 1/2, k = 1, alpha = 0: z^3 and z^5 terms of phi^2
    inv = NormalFormInvariants(as_scalar(Fraction(-1, 2)), RATIONAL_NEGATIVE, 1, 2, 1, ZERO)
    hol = holonomy_jet(inv, 5)
    c3, c5 = hol.iterate.coeff(3), hol.iterate.coeff(5)
    assert c3 == Tau.tau(1, ExactScalar(-2))
    assert c5 / (c3 * c3) == Tau.const(Fraction(3, 2))


def test_invariants_of_small_germs():
    fc = diffeo_formal_invariants(DiffeoGerm1(Jet1([0, 1, 1, 1], 3)), MultiplierDescriptor(0, 1))
    assert fc.contact == 1 and fc.alpha == Tau()
    fc = diffeo_formal_invariants(DiffeoGerm1(Jet1([0, 1, 0, 1, 0, Fraction(3, 2)], 5)),
                                  MultiplierDescriptor(1, 2), iterated=True)
    assert fc.k == 1 and fc.alpha == Tau()
    assert diffeo_formal_invariants(DiffeoGerm1.identity(6), MultiplierDescriptor(0, 1)).periodic


def test_invariants_need_order():
    with pytest.raises(InsufficientOrderError):
        diffeo_formal_invariants(DiffeoGerm1(Jet1([0, 1, 0, 1], 3)), MultiplierDescriptor(0, 1))


def test_kill_intermediate_is_a_conjugacy_invariant():
    phi = DiffeoGerm1(Jet1([0, 1, 0, 0, 2, 1, 3, 1, 5], 8))  # contact m = 3
    h = DiffeoGerm1(Jet1([0, 1, 2, 1], 8))
    killed = kill_intermediate(phi, 3)
    assert not killed.coeff(5) and not killed.coeff(6)
    a = diffeo_formal_invariants(phi, MultiplierDescriptor(0, 1))
    b = diffeo_formal_invariants(phi.conjugate(h), MultiplierDescriptor(0, 1))
    assert a.alpha == b.alpha


def test_rotation_times_tangent_part():
    # the multiplier -1 is representable: iterate the full germ
    inv = NormalFormInvariants(as_scalar(Fraction(-1, 2)), RATIONAL_NEGATIVE, 1, 2, 1, ONE)
    hol = holonomy_jet(inv, 7)
    rot = DiffeoGerm1(Jet1([0, -1], 7))
    full = rot.compose(hol.tangent)
    assert full.iterate(2) == hol.iterate
    fc = diffeo_formal_invariants(full, hol.descriptor)
    assert fc.alpha == Tau.const(1)


def test_conjugacy_identity_and_mismatch():
    L = FoliationGerm.linear(-1, 8)
    dec = formal_conjugacy_decide(L, L, 8)
    assert dec.conjugate and dec.transform.is_identity(8)
    assert not formal_conjugacy_decide(L, resonant_model(1, 1, 1, 0, 8), 8).conjugate


def test_conjugacy_of_perturbation():
    N = 8
    F = resonant_model(1, 1, 1, 1, N)
    phi = Map2(Jet2({(1, 0): 1, (0, 2): 1}, N, True), Jet2({(0, 1): 1, (2, 0): 1}, N, True))
    G = phi.pullback(F)
    dec = formal_conjugacy_decide(F, G, N)
    assert dec.conjugate
    assert same_foliation(dec.transform.pullback(G), F, N - 1)


def test_symmetries():
    N = 8
    L = FoliationGerm.linear(-1, N)
    assert symmetry_structure_check(L, Jet2.const(3, N)).ok
    model = resonant_model(1, 1, 1, 0, N)
    assert symmetry_structure_check(model, Jet2({(0, 0): 1, (1, 1): 1}, N)).ok
    irr = axes_germ(Jet2.const(I, N))
    assert symmetry_structure_check(irr, Jet2.const(2, N)).ok
    with pytest.raises(NotASymmetryError):
        symmetry_structure_check(irr, Jet2({(0, 0): 1, (1, 0): 1}, N))


def test_symmetry_reports_violations():
    # any g(xy) is allowed for x dy + y dx
    N = 8
    L = FoliationGerm.linear(-1, N)
    rep = symmetry_structure_check(L, Jet2({(0, 0): 1, (1, 1): 2, (2, 2): 1}, N))
    assert rep.ok and rep.case == "resonant"


def test_pair_verifier():
    N = 6
    F1, F2 = FoliationGerm.linear(-1, N), FoliationGerm.linear(-2, N)
    assert verify_pair_conjugacy(Map2.identity(N), (F1, F2), (F1, F2), N)
    assert verify_pair_conjugacy(Map2.linear(((2, 0), (0, 5)), N), (F1, F2), (F1, F2), N)
    with pytest.raises(NotAxisPreservingError):
        verify_pair_conjugacy(Map2.linear(((0, 1), (1, 0)), N), (F1, F2), (F1, F2), N)


def test_pair_verifier_detects_broken_second_germ():
    N = 6
    F1 = FoliationGerm.linear(-1, N)
    F2 = resonant_model(1, 1, 1, 0, N)
    # the normalizer of a perturbed first germ moves F2
    phi = Map2(Jet2.x(N), Jet2({(0, 1): 1, (1, 1): 1}, N))
    G1 = phi.inverse(N).pullback(F1)
    assert same_foliation(phi.pullback(G1), F1, N - 1)
    assert not verify_pair_conjugacy(phi, (F1, F2), (G1, F2), N)


def test_compose_pair_conjugacy():
    N = 6
    F1, F2 = FoliationGerm.linear(-1, N), FoliationGerm.linear(-2, N)
    ident = Map2.identity(N)
    scale = Map2.linear(((3, 0), (0, 2)), N)
    phi = compose_pair_conjugacy(ident, scale, scale, ident, (F1, F2), (F1, F2), N)
    assert phi.agrees_with(scale, N)
    with pytest.raises(PreconditionError):
        compose_pair_conjugacy(ident, ident, scale, ident, (F1, F2), (F1, F2), N)
