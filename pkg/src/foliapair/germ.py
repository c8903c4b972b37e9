"""Foliation germs as 1-forms, their linear part, tangency divisors and separatrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (IdenticalFoliationsError, NonIsolatedError, NonReducedError,
                     PreconditionError, ZeroFormError)
from .scalar import ONE, ZERO, ExactScalar, as_scalar, sqrt_exact
from .series import DEFAULT_ORDER, Jet1, Jet2

__all__ = [
    "FoliationGerm", "LinearClass", "Branch", "DivisorGerm", "BranchJet",
    "linear_classify", "tangency_divisor", "separatrix_jets", "eigen_directions",
    "REGULAR", "NONDEGENERATE", "RESONANT", "SADDLE_NODE", "NON_REDUCED", "REDUCED_TAGS",
]

REGULAR = "regular"
NONDEGENERATE = "reduced-nondegenerate"
RESONANT = "resonant-rational-negative"
SADDLE_NODE = "saddle-node"
NON_REDUCED = "non-reduced"
REDUCED_TAGS = frozenset({NONDEGENERATE, RESONANT, SADDLE_NODE})


class FoliationGerm:
    """The foliation ``ker(a dx + b dy)`` near the origin.

    Common monomial factors ``x^i y^j`` are divided out at construction and
    recorded in ``certificate``.
    """

    __slots__ = ("a", "b", "certificate")

    def __init__(self, a: Jet2, b: Jet2, certificate=(0, 0)):
        if a.is_zero() and b.is_zero():
            raise ZeroFormError("the zero 1-form defines no foliation")
        i = min(v for v in (a.x_valuation(), b.x_valuation()) if v is not None)
        j = min(v for v in (a.y_valuation(), b.y_valuation()) if v is not None)
        if i or j:
            a, b = a.shift(-i, -j), b.shift(-i, -j)
            certificate = (certificate[0] + i, certificate[1] + j)
        order = min(a.order, b.order)
        self.a = a.with_order(order) if a.exact else a
        self.b = b.with_order(order) if b.exact else b
        self.certificate = certificate

    @classmethod
    def from_vector_field(cls, P: Jet2, Q: Jet2):
        """Germ tangent to ``P d/dx + Q d/dy`` (its annihilator ``Q dx - P dy``)."""
        return cls(Q, -P)

    @classmethod
    def linear(cls, lam, order=DEFAULT_ORDER):
        """``x dy - lam y dx``."""
        lam = as_scalar(lam)
        return cls(Jet2.monomial(0, 1, -lam, order), Jet2.x(order))

    # -- data ------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.a.exact and self.b.exact

    @property
    def order(self) -> int:
        return min(self.a.order, self.b.order)

    @property
    def D(self):
        da, db = self.a.D, self.b.D
        return da if da is not None else db

    def vector_field(self):
        """Dual field ``-b d/dx + a d/dy``."""
        return (-self.b, self.a)

    def linear_part(self):
        """Matrix of the linear part of the dual vector field (rows = components)."""
        a, b = self.a, self.b
        return ((-b.coeff(1, 0), -b.coeff(0, 1)), (a.coeff(1, 0), a.coeff(0, 1)))

    def is_singular(self) -> bool:
        return not self.a.constant_term() and not self.b.constant_term()

    def algebraic_multiplicity(self) -> int:
        return min(v for v in (self.a.valuation(), self.b.valuation()) if v is not None)

    def __eq__(self, other):
        if not isinstance(other, FoliationGerm):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"FoliationGerm({self.to_text()})"

    def to_text(self) -> str:
        from .parser import format_form
        return format_form(self)

    def with_order(self, order: int) -> "FoliationGerm":
        return FoliationGerm(self.a.with_order(order), self.b.with_order(order), self.certificate)

    def truncated(self, order: int) -> "FoliationGerm":
        return FoliationGerm(self.a.truncate(order), self.b.truncate(order), self.certificate)

    def scale_form(self, unit: Jet2) -> "FoliationGerm":
        return FoliationGerm(self.a * unit, self.b * unit, self.certificate)

    def pullback(self, X: Jet2, Y: Jet2, normalize=True) -> "FoliationGerm":
        """``Phi^* omega`` for ``Phi = (X, Y)``."""
        A = self.a.substitute(X, Y)
        B = self.b.substitute(X, Y)
        new_a = A * X.dx() + B * Y.dx()
        new_b = A * X.dy() + B * Y.dy()
        return FoliationGerm(new_a, new_b)

    def pullback_raw(self, X: Jet2, Y: Jet2):
        A = self.a.substitute(X, Y)
        B = self.b.substitute(X, Y)
        return A * X.dx() + B * Y.dx(), A * X.dy() + B * Y.dy()

    def translate(self, x0, y0) -> "FoliationGerm":
        return FoliationGerm(self.a.translate(x0, y0), self.b.translate(x0, y0))

    def swap(self) -> "FoliationGerm":
        """Exchange the roles of x and y."""
        sw = lambda j: Jet2({(q, p): c for (p, q), c in j.terms.items()}, j.order, j.exact)
        return FoliationGerm(sw(self.b), sw(self.a))

    def wedge(self, other: "FoliationGerm") -> Jet2:
        """``f`` with ``omega_self ^ omega_other = f dx ^ dy``."""
        return self.a * other.b - other.a * self.b

    def contract(self, vx, vy) -> ExactScalar:
        """``omega(0)`` applied to a constant vector."""
        return self.a.constant_term() * vx + self.b.constant_term() * vy


# ---------------------------------------------------------------------------
# linear part


@dataclass(frozen=True)
class LinearClass:
    tag: str
    lam: ExactScalar | None = None
    trace: ExactScalar = ZERO
    det: ExactScalar = ZERO
    disc: ExactScalar = ZERO
    sqrt_disc: ExactScalar | None = None
    eigenvalues: tuple = ()

    @property
    def reduced(self) -> bool:
        return self.tag in REDUCED_TAGS

    @property
    def lam_is_rational(self) -> bool:
        return self.lam is not None and self.lam.is_rational()


def _is_positive_rational(z: ExactScalar) -> bool:
    return z.is_rational() and z.re > 0


def _eigenvalues(M):
    (m00, m01), (m10, m11) = M
    t = m00 + m11
    d = m00 * m11 - m01 * m10
    disc = t * t - 4 * d
    if not m01 or not m10:
        s = m00 - m11 if disc else ZERO
        return t, d, disc, s, (m00, m11)
    s = sqrt_exact(disc)
    l1, l2 = (t - s) / 2, (t + s) / 2
    if l2.key() < l1.key():
        l1, l2 = l2, l1
    return t, d, disc, s, (l1, l2)


def linear_classify(F: FoliationGerm, nonlinear_hint=True) -> LinearClass:
    """Exact linear-part classification of the singular point at the origin.

    A rational negative ratio is tagged resonant only when the germ carries
    terms beyond its linear part (a purely linear germ is its own model).
    """
    if not F.is_singular():
        return LinearClass(REGULAR)
    M = F.linear_part()
    (m00, m01), (m10, m11) = M
    if not (m00 or m01 or m10 or m11):
        return LinearClass(NON_REDUCED)
    t, d, disc, s, (l1, l2) = _eigenvalues(M)
    common = dict(trace=t, det=d, disc=disc, sqrt_disc=s, eigenvalues=(l1, l2))
    if not d:
        if not t:
            return LinearClass(NON_REDUCED, **common)
        if not l1:
            l1, l2 = l2, l1
            common["eigenvalues"] = (l1, l2)
        return LinearClass(SADDLE_NODE, lam=ZERO, **common)
    lam = l2 / l1
    if _is_positive_rational(lam):
        return LinearClass(NON_REDUCED, lam=lam, **common)
    if lam.is_rational() and lam.re < 0 and nonlinear_hint and _has_nonlinear_terms(F):
        return LinearClass(RESONANT, lam=lam, **common)
    return LinearClass(NONDEGENERATE, lam=lam, **common)


def _has_nonlinear_terms(F: FoliationGerm) -> bool:
    return any(i + j > 1 for i, j in F.a.terms) or any(i + j > 1 for i, j in F.b.terms)


def eigen_directions(F: FoliationGerm):
    """Pairs ``(eigenvalue, direction)`` of the dual field's linear part.

    Directions are normalized to ``(1, m)`` or ``(0, 1)`` and sorted
    lexicographically on the exact coordinates.
    """
    cls = linear_classify(F, nonlinear_hint=False)
    if cls.tag in (REGULAR, NON_REDUCED) and not (cls.tag == NON_REDUCED and cls.lam is not None):
        raise NonReducedError(f"no eigen-directions for a {cls.tag} point")
    (m00, m01), (m10, m11) = F.linear_part()
    out = []
    for mu in cls.eigenvalues:
        if m01:
            direction = (ONE, (mu - m00) / m01)
        elif m10:
            diff = mu - m11
            direction = (ONE, m10 / diff) if diff else (ZERO, ONE)
        else:
            direction = (ONE, ZERO) if mu == m00 else (ZERO, ONE)
        out.append((mu, direction))
    if len({d for _, d in out}) < 2:
        raise NonReducedError("eigen-directions coincide")
    out.sort(key=lambda e: (e[1][0].key(), e[1][1].key()))
    return out


# ---------------------------------------------------------------------------
# divisors


@dataclass(frozen=True)
class Branch:
    equation: Jet2
    multiplicity: int = 1
    kind: str = field(default="", compare=False)

    def order_at_origin(self) -> int:
        v = self.equation.valuation()
        return 0 if v is None else v

    def tangent_cone(self):
        return self.equation.homogeneous(self.order_at_origin())


def normalize_equation(eq: Jet2) -> Jet2:
    """Scale a branch equation so its lowest (degree, y-exponent) term has coefficient 1."""
    if eq.is_zero():
        return eq
    key = min(eq.terms, key=lambda m: (m[0] + m[1], m[1]))
    return eq * eq.terms[key].inverse()


@dataclass(frozen=True)
class DivisorGerm:
    branches: tuple = ()
    exact: bool = True

    def __post_init__(self):
        for br in self.branches:
            if br.multiplicity < 1:
                raise ValueError("branch multiplicity must be positive")

    @property
    def is_empty(self) -> bool:
        return not self.branches

    def support(self):
        return [br.equation for br in self.branches]

    def multiplicity_of(self, eq: Jet2) -> int:
        eq = normalize_equation(eq)
        for br in self.branches:
            if br.equation == eq:
                return br.multiplicity
        return 0

    def total_multiplicity(self) -> int:
        """Multiplicity at the origin of the defining function."""
        return sum(br.multiplicity * br.order_at_origin() for br in self.branches)

    def __repr__(self):
        inner = " + ".join(f"{br.multiplicity}*({br.equation.to_text()})" for br in self.branches)
        return f"DivisorGerm({inner or 'empty'})"

    def key(self):
        return tuple((tuple(sorted((m, c.key()) for m, c in br.equation.terms.items())), br.multiplicity)
                     for br in self.branches)

    def __eq__(self, other):
        if not isinstance(other, DivisorGerm):
            return NotImplemented
        return sorted(self.key()) == sorted(other.key())

    def __hash__(self):
        return hash(tuple(sorted(self.key())))


def _sort_branches(branches):
    return tuple(sorted(branches, key=lambda br: sorted(
        ((m[0] + m[1], m[1], m[0]), c.key()) for m, c in br.equation.terms.items())))


def divisor_of(f: Jet2) -> DivisorGerm:
    """Branches through the origin of ``f = 0`` with multiplicities.

    Exact polynomials are factored over the coefficient field; truncated
    jets only split off their monomial part.
    """
    if f.is_zero():
        raise IdenticalFoliationsError("the defining function vanishes identically")
    if f.constant_term():
        return DivisorGerm((), f.exact)
    order = f.order
    if f.exact:
        from ._sympy_bridge import factor_jet
        branches = []
        for fac, mult in factor_jet(f):
            if fac.constant_term() or fac.is_zero():
                continue
            branches.append(Branch(normalize_equation(fac.with_order(order)), mult))
        return DivisorGerm(_sort_branches(branches), True)
    i, j = f.common_monomial()
    branches = []
    if i:
        branches.append(Branch(Jet2.x(order), i))
    if j:
        branches.append(Branch(Jet2.y(order), j))
    rest = f.shift(-i, -j)
    if not rest.constant_term():
        branches.append(Branch(normalize_equation(rest), 1))
    return DivisorGerm(_sort_branches(branches), False)


def tangency_divisor(F1: FoliationGerm, F2: FoliationGerm) -> DivisorGerm:
    """Tang(F1, F2), the divisor of ``f`` with ``omega1 ^ omega2 = f dx^dy``."""
    f = F1.wedge(F2)
    if f.is_zero():
        raise IdenticalFoliationsError("the foliations coincide through the working order")
    return divisor_of(f)


# ---------------------------------------------------------------------------
# separatrices


@dataclass(frozen=True)
class BranchJet:
    """Smooth curve ``y = s(x)`` (``param='y'``) or ``x = s(y)`` (``param='x'``)."""

    param: str
    s: Jet1
    formal_only: bool = False
    eigenvalue: ExactScalar | None = None
    role: str = ""  # "strong" / "central" for saddle-nodes

    @property
    def tangent(self):
        slope = self.s[1]
        return (ONE, slope) if self.param == "y" else (slope, ONE)

    @property
    def order(self) -> int:
        return self.s.order

    def equation(self) -> Jet2:
        """Defining function ``y - s(x)`` or ``x - s(y)``."""
        n = self.s.order
        if self.param == "y":
            return Jet2.y(n, False) - Jet2.from_jet1(self.s, "x", n)
        return Jet2.x(n, False) - Jet2.from_jet1(self.s, "y", n)

    def residual(self, F: FoliationGerm) -> Jet1:
        """``omega`` evaluated on the tangent of the parametrized curve."""
        ds = self.s.derivative()
        if self.param == "y":
            a = F.a.along_curve(self.s, "y")
            b = F.b.along_curve(self.s, "y")
            # a factor vanishing at 0 restores the order lost by differentiating
            if not b[0]:
                ds = Jet1(ds.coeffs, b.order)
            return a + b * ds
        a = F.a.along_curve(self.s, "x")
        b = F.b.along_curve(self.s, "x")
        if not a[0]:
            ds = Jet1(ds.coeffs, a.order)
        return a * ds + b

    def is_invariant(self, F: FoliationGerm, order: int | None = None) -> bool:
        r = self.residual(F)
        n = r.order if order is None else min(order, r.order)
        return all(not r[k] for k in range(n + 1))


def _solve_branch(F: FoliationGerm, param: str, slope: ExactScalar, order: int) -> Jet1:
    coeffs = [ZERO, slope]
    for n in range(2, order + 1):
        base = coeffs + [ZERO]
        r0 = BranchJet(param, Jet1(base, n)).residual(F)[n]
        r1 = BranchJet(param, Jet1(coeffs + [ONE], n)).residual(F)[n]
        slope_n = r1 - r0
        if slope_n:
            coeffs.append(-r0 / slope_n)
        elif not r0:
            coeffs.append(ZERO)
        else:
            raise NonReducedError(f"no formal invariant curve in this direction at order {n}")
    return Jet1(coeffs, order)


def separatrix_jets(F: FoliationGerm, order: int | None = None):
    """The two invariant curves of a reduced singular point, as jets.

    Saddle-nodes return the strong manifold and the (formal-only) central
    manifold; curves are sorted by tangent direction.
    """
    cls = linear_classify(F)
    if not cls.reduced:
        raise NonReducedError(f"separatrices need a reduced singular point, got {cls.tag}")
    n = F.order if order is None else order
    if F.exact and order is None:
        n = max(F.order, 2)
    out = []
    for mu, (dx, dy) in eigen_directions(F):
        if dx:
            param, slope = "y", dy / dx
        else:
            param, slope = "x", ZERO
        s = _solve_branch(F, param, slope, n)
        role = ""
        formal = False
        if cls.tag == SADDLE_NODE:
            role = "central" if not mu else "strong"
            formal = not mu
        out.append(BranchJet(param, s, formal, mu, role))
    return out
