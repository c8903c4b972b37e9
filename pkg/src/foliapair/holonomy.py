"""Holonomy jets of normal forms and formal conjugacy of germs and pairs.

The factor ``2 i pi`` never gets a numerical value: it is the symbol ``tau``
(see :mod:`foliapair.tau`).  A holonomy with multiplier ``e^{2 i pi p/q}`` is
stored as the descriptor ``(p, q)`` together with its tangent-to-identity
factor ``exp(v)``, ``v = -tau (z^{m+1} + alpha z^{2m+1})``, ``m = kq``.  The
rotation commutes with ``exp(v)``, so the ``q``-th iterate is ``exp(q v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InsufficientOrderError, NotASymmetryError, NotAxisPreservingError, PreconditionError,
)
from .germ import FoliationGerm, linear_classify, SADDLE_NODE
from .maps import Map2, same_foliation
from .normal_form import (
    NON_RESONANT, NormalFormInvariants, formal_normalize, resonance_data,
)
from .scalar import ONE, ZERO, ExactScalar, as_scalar
from .series import Jet1, Jet2
from .tau import Tau

__all__ = [
    "DiffeoGerm1", "MultiplierDescriptor", "HolonomyJet", "DiffeoFormalClass",
    "exp_flow_jet", "holonomy_jet", "diffeo_formal_invariants", "kill_intermediate",
    "ConjugacyDecision", "formal_conjugacy_decide", "SymmetryReport", "symmetry_structure_check",
    "is_axis_preserving", "verify_pair_conjugacy", "compose_pair_conjugacy",
]


def _tau(v) -> Tau:
    return v if isinstance(v, Tau) else Tau.const(as_scalar(v))


def _tau_jet(j: Jet1) -> Jet1:
    return Jet1([_tau(c) for c in j.coeffs])


class DiffeoGerm1:
    """A jet ``a_1 z + a_2 z^2 + ...`` with ``a_1 != 0``; coefficients are Tau values."""

    __slots__ = ("jet",)

    def __init__(self, jet: Jet1):
        jet = _tau_jet(jet)
        if jet[0]:
            raise PreconditionError("a diffeomorphism germ fixes the origin")
        if jet.order < 1 or not jet[1]:
            raise PreconditionError("a diffeomorphism germ has a nonzero multiplier")
        self.jet = jet

    @classmethod
    def identity(cls, order: int) -> "DiffeoGerm1":
        return cls(Jet1([ZERO, ONE], order))

    @property
    def order(self) -> int:
        return self.jet.order

    @property
    def multiplier(self) -> Tau:
        return self.jet[1]

    def coeff(self, n: int) -> Tau:
        return self.jet[n]

    def compose(self, inner: "DiffeoGerm1") -> "DiffeoGerm1":
        return DiffeoGerm1(self.jet.compose(inner.jet))

    def inverse(self) -> "DiffeoGerm1":
        return DiffeoGerm1(self.jet.invert())

    def iterate(self, n: int) -> "DiffeoGerm1":
        if n < 1:
            raise ValueError("iterate count must be positive")
        out = self
        for _ in range(n - 1):
            out = self.compose(out)
        return out

    def conjugate(self, h: "DiffeoGerm1") -> "DiffeoGerm1":
        """``h^{-1} o self o h``."""
        return h.inverse().compose(self.compose(h))

    def is_identity(self, order: int | None = None) -> bool:
        n = self.order if order is None else order
        return all(self.jet[j] == (ONE if j == 1 else ZERO) for j in range(n + 1))

    def truncate(self, order: int) -> "DiffeoGerm1":
        return DiffeoGerm1(self.jet.truncate(order))

    def __eq__(self, other):
        if not isinstance(other, DiffeoGerm1):
            return NotImplemented
        return self.jet.coeffs == other.jet.coeffs

    def __repr__(self):
        terms = [f"({c})*z^{n}" for n, c in enumerate(self.jet.coeffs) if c]
        return "DiffeoGerm1(" + " + ".join(terms) + f" + O(z^{self.order + 1}))"


@dataclass(frozen=True)
class MultiplierDescriptor:
    """``e^{2 i pi p/q}`` for a root of unity, or ``e^{-2 i pi lam}`` for irrational ``lam``."""

    p: int | None = None
    q: int | None = None
    lam: ExactScalar | None = None

    @classmethod
    def from_lambda(cls, lam) -> "MultiplierDescriptor":
        lam = as_scalar(lam)
        if lam.is_rational():
            r = Fraction(-lam.re)
            return cls(r.numerator % r.denominator, r.denominator)
        return cls(lam=lam)

    @property
    def is_root_of_unity(self) -> bool:
        return self.q is not None

    @property
    def is_trivial(self) -> bool:
        return self.q == 1

    def to_dict(self) -> dict:
        if self.is_root_of_unity:
            return {"kind": "root-of-unity", "p": self.p, "q": self.q}
        return {"kind": NON_RESONANT, "lambda": str(self.lam)}


@dataclass
class HolonomyJet:
    descriptor: MultiplierDescriptor
    tangent: DiffeoGerm1
    iterate: DiffeoGerm1
    vector_field: Jet1 | None = None


@dataclass(frozen=True)
class DiffeoFormalClass:
    descriptor: MultiplierDescriptor
    periodic: bool
    contact: int | None = None
    normalized_coefficient: Tau | None = None
    alpha: Tau | None = None

    @property
    def k(self) -> int | None:
        if self.contact is None:
            return None
        return self.contact // self.descriptor.q

    def key(self):
        return (self.descriptor, self.periodic, self.contact, self.alpha)

    def to_dict(self) -> dict:
        out = {"multiplier": self.descriptor.to_dict(), "periodic": self.periodic}
        if self.contact is not None:
            out.update(contact=self.contact, k=self.k, alpha=str(self.alpha),
                       normalized_coefficient=str(self.normalized_coefficient))
        return out


# ---------------------------------------------------------------------------
# flows


def _lie(v: list, g: list, order: int) -> list:
    """Coefficients of ``v g'`` through ``order``."""
    zero = Tau()
    out = [zero] * (order + 1)
    dg = [(g[n] * n, n - 1) for n in range(1, len(g)) if g[n]]
    for i, vi in enumerate(v):
        if not vi:
            continue
        for c, j in dg:
            if i + j > order:
                break
            out[i + j] = out[i + j] + vi * c
    return out


def exp_flow_jet(v: Jet1, order: int | None = None) -> DiffeoGerm1:
    """Time-one flow of ``z' = v(z)`` for ``v = O(z^2)``: ``sum L_v^n(z) / n!``."""
    n = v.order if order is None else order
    vs = [_tau(c) for c in v.truncate(n).coeffs] if v.order >= n else [_tau(c) for c in v.coeffs]
    vs += [Tau()] * (n + 1 - len(vs))
    if vs[0] or (len(vs) > 1 and vs[1]):
        raise PreconditionError("exact flows need a vector field tangent to the identity")
    term = [Tau()] * (n + 1)
    if n >= 1:
        term[1] = Tau.const(ONE)
    total = list(term)
    fact = 1
    for m in range(1, n):
        term = _lie(vs, term, n)
        if not any(term):
            break
        fact *= m
        inv = as_scalar(Fraction(1, fact))
        total = [a + b * inv for a, b in zip(total, term)]
    return DiffeoGerm1(Jet1(total))


def _holonomy_field(m: int, alpha, order: int) -> Jet1:
    cs = [Tau()] * (order + 1)
    minus_tau = Tau.tau(1, -ONE)
    if m + 1 <= order:
        cs[m + 1] = minus_tau
    if 2 * m + 1 <= order:
        cs[2 * m + 1] = minus_tau * _tau(alpha)
    return Jet1(cs)


def holonomy_jet(inv: NormalFormInvariants, order: int) -> HolonomyJet:
    """Holonomy of the normal form with invariants ``inv`` around the separatrix ``y = 0``."""
    if inv.lam_class == NON_RESONANT or inv.linearizable:
        desc = MultiplierDescriptor.from_lambda(inv.lam)
        ident = DiffeoGerm1.identity(order)
        return HolonomyJet(desc, ident, ident)
    p, q, k = inv.p, inv.q, inv.k
    m = k * q
    if order < 2 * m + 1:
        raise InsufficientOrderError(f"holonomy jet needs order >= {2 * m + 1}, got {order}")
    desc = MultiplierDescriptor(p % q, q)
    v = _holonomy_field(m, inv.alpha, order)
    tangent = exp_flow_jet(v, order)
    qv = Jet1([c * q for c in v.coeffs])
    return HolonomyJet(desc, tangent, exp_flow_jet(qv, order), v)


# ---------------------------------------------------------------------------
# invariants of one-variable germs


def kill_intermediate(phi: DiffeoGerm1, m: int) -> DiffeoGerm1:
    """Conjugate ``z + c z^{m+1} + ...`` so that ``z^{m+2} .. z^{2m}`` vanish.

    Conjugating by ``z + b z^j`` shifts the ``z^{m+j}`` coefficient by
    ``c b (m + 1 - j)`` and leaves lower ones alone.
    """
    c = phi.coeff(m + 1)
    for j in range(2, m + 1):
        e = phi.coeff(m + j)
        if not e:
            continue
        b = -(e / (c * (m + 1 - j)))
        h = DiffeoGerm1(Jet1([Tau(), Tau.const(ONE)] + [Tau()] * (j - 2) + [b], phi.order))
        phi = phi.conjugate(h)
    return phi


def diffeo_formal_invariants(phi: DiffeoGerm1, descriptor: MultiplierDescriptor,
                             iterated: bool = False) -> DiffeoFormalClass:
    """Formal class: contact ``m`` of ``phi^q`` to the identity and ``alpha``.

    ``phi`` is either the full germ (its multiplier a representable ``q``-th
    root of unity), its tangent factor commuting with the rotation, or, with
    ``iterated=True``, the ``q``-th iterate itself.
    """
    if not descriptor.is_root_of_unity:
        # irrational rotation: formally linearizable, the multiplier is the class
        return DiffeoFormalClass(descriptor, periodic=True)
    q = descriptor.q
    psi = phi if iterated else phi.iterate(q)
    if psi.multiplier != Tau.const(ONE):
        raise PreconditionError("the q-th iterate is not tangent to the identity")
    m = next((j - 1 for j in range(2, psi.order + 1) if psi.coeff(j)), None)
    if m is None:
        return DiffeoFormalClass(descriptor, periodic=True)
    if psi.order < 2 * m + 1:
        raise InsufficientOrderError(f"the invariant needs order >= {2 * m + 1}, got {psi.order}")
    if m % q:
        raise PreconditionError(f"contact {m} is not a multiple of q = {q}")
    psi = kill_intermediate(psi, m)
    c, d = psi.coeff(m + 1), psi.coeff(2 * m + 1)
    if not c.is_monomial():
        raise PreconditionError("leading coefficient must be a single tau-monomial")
    ratio = d / (c * c)
    alpha = Tau.tau(1, as_scalar(q)) * (Tau.const(Fraction(m + 1, 2)) - ratio)
    return DiffeoFormalClass(descriptor, False, m, ratio, alpha)


# ---------------------------------------------------------------------------
# conjugacy of germs


@dataclass
class ConjugacyDecision:
    conjugate: bool
    transform: Map2 | None
    invariants: tuple
    reason: str

    def to_dict(self) -> dict:
        return {"conjugate": self.conjugate, "reason": self.reason,
                "invariants": [i.to_dict() for i in self.invariants]}


def formal_conjugacy_decide(F: FoliationGerm, G: FoliationGerm, order: int = 12) -> ConjugacyDecision:
    """Decide formal conjugacy of two reduced germs; a positive answer carries ``Phi``.

    ``Phi^* omega_G ^ omega_F`` is re-verified through ``order - 1``; a
    certificate that fails to verify raises instead of returning.
    """
    rf, rg = formal_normalize(F, order), formal_normalize(G, order)
    ia, ib = rf.invariants, rg.invariants
    if ia.key() != ib.key():
        return ConjugacyDecision(False, None, (ia, ib), "invariants differ")
    if rf.full_map is None or rg.full_map is None:
        raise InsufficientOrderError("normalizing map needs a root outside the scalar field")
    mf = rf.full_map.truncate(order)
    mg = rg.full_map.truncate(order)
    phi = mg.compose(mf.inverse(order)).truncate(order)
    if not same_foliation(phi.pullback(G), F, order - 1):
        raise InsufficientOrderError("certificate did not verify; raise the order")
    return ConjugacyDecision(True, phi, (ia, ib), "invariants agree")


# ---------------------------------------------------------------------------
# symmetries


@dataclass
class SymmetryReport:
    case: str
    allowed: str
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"case": self.case, "allowed": self.allowed, "ok": self.ok,
                "violations": [list(m) for m in self.violations]}


def symmetry_structure_check(F: FoliationGerm, g: Jet2, order: int | None = None) -> SymmetryReport:
    """Check that ``(x, y g)`` preserves ``F`` and report monomials of ``g`` outside the expected span.

    Linear non-resonant: ``g`` constant.  ``lam = -p/q``: ``g = g(x^p y^q)``.
    """
    n = g.order if order is None else order
    X = Jet2.x(n, True)
    Y = Jet2(Jet2.y(n, True).terms, n, False) * Jet2(g.terms, n, False)
    Phi = Map2(X, Y)
    if not same_foliation(Phi.pullback(F), F, n - 1):
        raise NotASymmetryError("(x, y g) does not preserve the foliation")
    cls = linear_classify(F)
    lam = ZERO if cls.tag == SADDLE_NODE else cls.lam
    lam_class, p, q = resonance_data(lam)
    # the wedge test certifies g only through degree n - 1
    mons = sorted(m for m, c in g.terms.items() if c and sum(m) < n)
    if lam_class == NON_RESONANT:
        bad = [m for m in mons if m != (0, 0)]
        return SymmetryReport("non-resonant", "constants", bad)
    bad = [m for m in mons if not (m[1] % q == 0 and m[0] == p * (m[1] // q))]
    return SymmetryReport("resonant", f"functions of x^{p} y^{q}", bad)


# ---------------------------------------------------------------------------
# pairs


def is_axis_preserving(Phi: Map2) -> bool:
    """``Phi = (x a, y b)``."""
    return all(i >= 1 for (i, _), c in Phi.X.terms.items() if c) and \
        all(j >= 1 for (_, j), c in Phi.Y.terms.items() if c)


def verify_pair_conjugacy(Phi: Map2, pair_f, pair_g, order: int) -> bool:
    """``Phi^* omega_{G_i} ^ omega_{F_i}`` vanishes through ``order - 1`` for both germs."""
    if not is_axis_preserving(Phi):
        raise NotAxisPreservingError("the conjugating map must preserve both axes")
    return all(same_foliation(Phi.pullback(G), F, order - 1) for F, G in zip(pair_f, pair_g))


def compose_pair_conjugacy(phi1: Map2, phi2: Map2, psi1: Map2, psi2: Map2,
                           pair_f, pair_g, order: int) -> Map2:
    """Assemble ``Phi = Phi1 o Psi1`` from a candidate decomposition.

    ``Phi_i`` conjugates ``F_i`` to ``G_i``, ``Psi1`` preserves ``F1``,
    ``Psi2`` preserves ``F2`` and ``Phi1 o Psi1 = Phi2 o Psi2^{-1}``.  Each
    hypothesis is checked; the decomposition is never searched for.
    """
    (F1, F2), (G1, G2) = pair_f, pair_g
    n = order - 1
    checks = [
        ("Phi1 conjugates F1 to G1", same_foliation(phi1.pullback(G1), F1, n)),
        ("Phi2 conjugates F2 to G2", same_foliation(phi2.pullback(G2), F2, n)),
        ("Psi1 preserves F1", same_foliation(psi1.pullback(F1), F1, n)),
        ("Psi2 preserves F2", same_foliation(psi2.pullback(F2), F2, n)),
    ]
    for what, ok in checks:
        if not ok:
            raise PreconditionError(f"candidate decomposition fails: {what}")
    left = phi1.compose(psi1).truncate(order)
    right = phi2.compose(psi2.inverse(order)).truncate(order)
    if not left.agrees_with(right, order):
        raise PreconditionError("candidate decomposition fails: Phi1 o Psi1 != Phi2 o Psi2^-1")
    if not verify_pair_conjugacy(left, pair_f, pair_g, order):
        raise PreconditionError("assembled map does not conjugate the pairs")
    return left
