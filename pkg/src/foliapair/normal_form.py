"""Transversely formal normal forms of reduced singular points.

A reduced germ is brought to ``x dy - h(x, y) y dx`` with both axes invariant,
then the coefficients of ``h`` are removed one power of ``y`` at a time,
leaving a series in the resonant monomial ``u = x^p y^q``.  The last step
normalizes the one-variable form ``du / (u f(u))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import ClassificationError, InsufficientOrderError, NonReducedError, PreconditionError
from .germ import (NON_REDUCED, REGULAR, SADDLE_NODE, FoliationGerm, eigen_directions,
                   linear_classify, separatrix_jets)
from .maps import Map2
from .scalar import ONE, ZERO, ExactScalar, as_scalar, root_exact, sqrt_exact
from .series import DEFAULT_ORDER, Jet1, Jet2

__all__ = [
    "NormalFormInvariants", "TransverselyFormalTransform", "NormalFormResult", "KillResult",
    "axes_germ", "axes_coefficient", "resonant_model", "briot_bouquet_straighten",
    "kill_nonresonant_terms", "normalize_oneform_1var", "formal_normalize", "residue",
    "resonance_data", "working_degree", "jet1_power",
]

NON_RESONANT = "non-resonant"
RATIONAL_NEGATIVE = "rational-negative"
ZERO_CLASS = "zero"


@dataclass(frozen=True)
class NormalFormInvariants:
    lam: ExactScalar
    lam_class: str
    p: int | None = None
    q: int | None = None
    k: int | None = None
    alpha: ExactScalar | None = None
    linearizable: bool = False
    certified_order: int = 0

    def key(self):
        """Everything except the certification order."""
        return (self.lam, self.lam_class, self.p, self.q, self.k, self.alpha, self.linearizable)

    def to_dict(self) -> dict:
        out = {"lambda": str(self.lam), "class": self.lam_class, "linearizable": self.linearizable,
               "certified_order": self.certified_order}
        if self.p is not None:
            out.update(p=self.p, q=self.q)
        if self.k is not None:
            out.update(k=self.k, alpha=str(self.alpha))
        return out


@dataclass
class TransverselyFormalTransform:
    """``(x, y) -> (a x, y g(x, y))``; ``a = 1`` except for the final rescaling."""

    g: Jet2
    x_scale: ExactScalar = ONE
    stages: list = field(default_factory=list)
    complete: bool = True

    def as_map(self) -> Map2:
        return Map2(Jet2.x(self.g.order, True) * self.x_scale, Jet2.y(self.g.order, True) * self.g)

    def is_identity(self, order: int | None = None) -> bool:
        n = self.g.order if order is None else order
        return self.x_scale == ONE and self.g.agrees_with(Jet2.const(1, n, True), n)


# ---------------------------------------------------------------------------
# model shapes: both axes invariant


def axes_germ(h: Jet2) -> FoliationGerm:
    """``x dy - h y dx``."""
    return FoliationGerm(-(Jet2.y(h.order, True) * h), Jet2.x(h.order, True))


def axes_coefficient(F: FoliationGerm) -> Jet2:
    """``h`` with ``omega`` proportional to ``x dy - h y dx``; both axes must be invariant."""
    a, b = F.a, F.b
    if any(i == 0 for i, _ in b.terms) or any(j == 0 for _, j in a.terms):
        raise PreconditionError("the coordinate axes are not invariant")
    B = b.shift(-1, 0)
    A = -a.shift(0, -1)
    if not B.constant_term():
        raise PreconditionError("the y-axis carries a zero eigenvalue; swap the coordinates")
    order = min(A.order, B.order)
    return Jet2(A.terms, order, A.exact) * Jet2(B.terms, order, False).unit_inverse()


def resonance_data(lam: ExactScalar):
    """``(class, p, q)`` for the eigenvalue ratio ``lam``."""
    if not lam:
        return ZERO_CLASS, 0, 1
    if lam.is_rational():
        r = -lam.re
        if r > 0:
            return RATIONAL_NEGATIVE, r.numerator, r.denominator
        raise NonReducedError(f"lambda = {lam} is a positive rational")
    return NON_RESONANT, None, None


def working_degree(order: int, p, q) -> int:
    """Total degree needed to know ``h`` through ``y``-degree ``order`` along ``u = x^p y^q``."""
    if p is None or p == 0:
        return order
    return max(order, (p + q) * (order // q))


def resonant_model(p: int, q: int, k: int, alpha, order: int = DEFAULT_ORDER) -> FoliationGerm:
    """``x dy - (-p/q + u^k + alpha u^{2k}) y dx``, ``u = x^p y^q`` (p = 0: saddle-node)."""
    alpha = as_scalar(alpha)
    lam = as_scalar(Fraction(-p, q))
    h = Jet2({(0, 0): lam, (p * k, q * k): ONE, (2 * p * k, 2 * q * k): alpha}, order, True)
    return axes_germ(h)


# ---------------------------------------------------------------------------
# straightening


def _orient(F: FoliationGerm, order: int):
    """Linear change putting the first eigendirection on the x-axis.

    For a saddle-node the strong (nonzero) direction goes on the x-axis and
    the central one on the y-axis.
    """
    cls = linear_classify(F, nonlinear_hint=False)
    (m00, m01), (m10, m11) = F.linear_part()
    if not m01 and not m10:
        # already diagonal: keep the axis order used by the classifier
        if cls.tag == SADDLE_NODE and not m00:
            return Map2(Jet2.y(order, True), Jet2.x(order, True))
        return Map2.identity(order)
    dirs = eigen_directions(F)
    l1, l2 = cls.eigenvalues
    if cls.tag == SADDLE_NODE:
        first = [d for mu, d in dirs if mu][0]
        second = [d for mu, d in dirs if not mu][0]
    else:
        first = [d for mu, d in dirs if mu == l1][0]
        second = [d for mu, d in dirs if d != first][0]
    return Map2.linear(((first[0], second[0]), (first[1], second[1])), order)


def briot_bouquet_straighten(F: FoliationGerm, order: int | None = None):
    """Put both invariant curves of a reduced germ on the axes.

    Returns the germ in the shape ``x dy - (lam + f) y dx`` (as a
    FoliationGerm known through total degree ``order``) and the change of
    coordinates (new coordinates to old) as a Map2.
    """
    cls = linear_classify(F)
    if cls.tag in (REGULAR, NON_REDUCED):
        raise NonReducedError(f"straightening needs a reduced singular point, got {cls.tag}")
    n = F.order if order is None else order
    work = n + 2
    L = _orient(F, work)
    G = L.pullback(_cut(F, work))
    total = L
    # x-axis separatrix y = s(x), then y-axis separatrix x = r(y)
    for target in ("y", "x"):
        if _axis_invariant(G, target):
            continue
        seps = separatrix_jets(G, work)
        sep = [s for s in seps if s.param == target and not s.s[1]]
        if not sep:
            raise ClassificationError("separatrix not tangent to a coordinate axis")
        s = Jet2.from_jet1(sep[0].s, "x" if target == "y" else "y", work)
        s = Jet2(s.terms, work, False)
        x, y = Jet2.x(work, True), Jet2.y(work, True)
        step = Map2(x, y + s) if target == "y" else Map2(x + s, y)
        if not step.is_identity(work):
            G = step.pullback(G)
            total = total.compose(step)
    G = _clean_axes(G, n + 1)
    return axes_germ(axes_coefficient(G)), total


def _axis_invariant(G: FoliationGerm, target: str) -> bool:
    if target == "y":  # the x-axis {y = 0}
        return not any(j == 0 for _, j in G.a.terms)
    return not any(i == 0 for i, _ in G.b.terms)


def _cut(F: FoliationGerm, order: int) -> FoliationGerm:
    return FoliationGerm(Jet2(F.a.terms, order, False), Jet2(F.b.terms, order, False))


def _clean_axes(G: FoliationGerm, order: int) -> FoliationGerm:
    """Truncate and check that the axes are invariant through ``order``."""
    a = Jet2(G.a.terms, order, False)
    b = Jet2(G.b.terms, order, False)
    if any(i == 0 for i, _ in b.terms) or any(j == 0 for _, j in a.terms):
        raise ClassificationError("axes not invariant after straightening")
    return FoliationGerm(a, b)


# ---------------------------------------------------------------------------
# coefficient killing


@dataclass
class KillResult:
    h: Jet2
    residual: Jet1
    transform: TransverselyFormalTransform
    p: int | None
    q: int | None


def _y_slice(h: Jet2, n: int):
    return {i: c for (i, j), c in h.terms.items() if j == n}


def _apply_stage(h: Jet2, G: Jet2) -> Jet2:
    """Effect of ``y = Y G(x, Y)`` on ``x dy - h y dx``."""
    order = h.order
    x, y = Jet2.x(order, True), Jet2.y(order, True)
    hs = h.substitute(x, y * G)
    num = hs * G - x * G.dx()
    den = G + y * G.dy()
    return num * Jet2(den.terms, order, False).unit_inverse()


def kill_nonresonant_terms(h: Jet2, order: int, lam: ExactScalar | None = None) -> KillResult:
    """Remove every non-resonant coefficient of ``h - lam`` up to ``y``-degree ``order``.

    ``h`` must be known through total degree ``working_degree(order, p, q)``.
    """
    lam = h.constant_term() if lam is None else as_scalar(lam)
    cls, p, q = resonance_data(lam)
    D = h.order
    h = Jet2(h.terms, D, False)
    x = Jet2.x(D, True)
    stages = []

    def resonant(m, n):
        if cls == NON_RESONANT:
            return False
        if n % q or (p == 0 and m):
            return False
        j = n // q
        return m == p * j

    # stage 0: y -> phi0(x) y with x phi0' = a0 phi0
    a0 = _y_slice(h, 0)
    a0.pop(0, None)
    if a0:
        c = [ONE]
        for m in range(1, D + 1):
            acc = ZERO
            for j in range(1, m + 1):
                if j in a0:
                    acc = acc + a0[j] * c[m - j]
            c.append(acc / m)
        G = Jet2({(m, 0): cm for m, cm in enumerate(c)}, D, True)
        h = _apply_stage(h, G)
        stages.append((0, G))
    for n in range(1, order + 1):
        if n > D:
            break
        coeffs = {}
        for m, a in _y_slice(h, n).items():
            if resonant(m, n):
                continue
            div = lam * n + m
            if not div:
                raise ClassificationError(f"zero divisor at (m, n) = ({m}, {n}) off the resonance lattice")
            coeffs[(m, n)] = a / div
        if coeffs:
            G = Jet2({(0, 0): ONE, **coeffs}, D, True)
            h = _apply_stage(h, G)
            stages.append((n, G))
        left = {m for m, _ in _y_slice(h, n).items() if not resonant(m, n)}
        if left:
            raise ClassificationError(f"stage {n} left non-resonant terms at x-degrees {sorted(left)}")
    # compose y = Y g(x, Y) lazily, once
    g = Jet2.const(1, D, False)
    X, Y = Jet2.x(D, False), Jet2.y(D, False)
    for _, G in stages:
        G = Jet2(G.terms, D, False)
        g = G * g.substitute(X, Y * G)
    tr = TransverselyFormalTransform(g, ONE, [n for n, _ in stages])
    residual = _residual(h, order, cls, p, q)
    return KillResult(h, residual, tr, p, q)


def _residual(h: Jet2, order: int, cls, p, q) -> Jet1:
    if cls == NON_RESONANT:
        return Jet1([ZERO], order)
    nu = order // q
    cs = [ZERO]
    for j in range(1, nu + 1):
        if (p + q) * j > h.order:
            nu = j - 1
            break
        cs.append(h.coeff(p * j, q * j))
    return Jet1(cs[: nu + 1], nu)


# ---------------------------------------------------------------------------
# one-variable forms


def residue(f: Jet1) -> ExactScalar:
    """Residue at 0 of ``du / (u f(u))``; needs ``f`` through order ``2k``."""
    k = f.valuation()
    if k is None:
        raise PreconditionError("residue of a form with f = 0")
    unit = f.shift(-k)
    if unit.order < k:
        raise InsufficientOrderError(f"residue needs f through order {2 * k}")
    return unit.unit_inverse()[k]


def jet1_power(w: Jet1, r: Fraction) -> Jet1:
    """``w^r`` for ``w(0) = 1`` (principal branch), by the J.C.P. Miller recursion."""
    if w[0] != ONE:
        raise PreconditionError("fractional power needs w(0) = 1")
    r = Fraction(r)
    y = [ONE]
    for n in range(1, w.order + 1):
        acc = ZERO
        for j in range(1, n + 1):
            if w[j]:
                acc = acc + w[j] * y[n - j] * ((r + 1) * j - n)
        y.append(acc / n)
    return Jet1(y)


def _pulled_P(f_red: Jet1, k: int, phi: Jet1) -> Jet1:
    """``u^{k+1} phi' / (phi f(phi))`` for ``f = u^k f_red``."""
    n = f_red.order
    phi = phi.truncate(n + 1) if phi.order > n + 1 else phi
    ratio = phi.shift(-1)  # phi / u
    core = f_red.compose(phi.truncate(n)) if phi.order >= n else f_red.compose(phi)
    d = phi.derivative().truncate(n)
    return d * (ratio.truncate(n) ** (k + 1)).unit_inverse() * core.unit_inverse()


def normalize_oneform_1var(f: Jet1, target=None):
    """Tangent-to-identity ``phi`` with ``phi^*(du/(u f)) = (1/c) du/u^{k+1} + alpha du/u``.

    ``c`` is the leading coefficient of ``f`` and ``alpha`` the residue.  With
    ``target`` (a callable taking ``alpha`` and returning the wanted
    ``u^{k+1}``-multiplied coefficient series) another normalization is used.
    Returns ``(phi, k, alpha)``; ``phi`` is known through order ``N - k`` when
    ``f`` is known through ``N``.
    """
    k = f.valuation()
    if k is None:
        raise PreconditionError("f vanishes through the working order (linearizable case)")
    f_red = f.shift(-k)
    n = f_red.order
    if n < k:
        raise InsufficientOrderError(f"normalization needs f through order {2 * k}")
    c = f_red[0]
    alpha = residue(f)
    if target is None:
        T = Jet1([c.inverse()] + [ZERO] * (k - 1) + [alpha], n)
    else:
        T = target(alpha).truncate(n)
    coeffs = [ZERO, ONE]
    for j in range(1, n + 1):
        trial = Jet1(coeffs + [ZERO], j + 1)
        P = _pulled_P(f_red.truncate(j), k, trial)
        if j == k:
            if P[j] != T[j]:
                raise ClassificationError("target form has the wrong residue")
            coeffs.append(ZERO)
            continue
        slope = ExactScalar(Fraction(j - k)) / c
        coeffs.append((T[j] - P[j]) / slope)
    return Jet1(coeffs, n + 1), k, alpha


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class NormalFormResult:
    invariants: NormalFormInvariants
    transform: TransverselyFormalTransform
    straighten: Map2
    full_map: Map2 | None
    normal_germ: FoliationGerm | None
    residual: Jet1
    normalized_residual: Jet1 | None = None

    def oneform_residue(self) -> ExactScalar:
        """Residue of ``du / (q u f(u))`` for the normalized series ``f``."""
        q = self.invariants.q
        return residue(self.normalized_residual * q)


def _kth_root(z: ExactScalar, k: int):
    r = root_exact(z, k)
    if r is None and k == 2 and z.D is None:
        try:
            r = sqrt_exact(z)
        except Exception:
            r = None
    return r


def _bezout(p: int, q: int):
    # s p + t q = 1
    def eg(a, b):
        if b == 0:
            return a, 1, 0
        g, s, t = eg(b, a % b)
        return g, t, s - (a // b) * t
    g, s, t = eg(p, q)
    if g != 1:
        raise ValueError("p and q must be coprime")
    return s, t


def formal_normalize(F: FoliationGerm, order: int = DEFAULT_ORDER) -> NormalFormResult:
    """Invariants and normalizing transform of a reduced singular germ.

    ``order`` is the transverse (``y``) order; the residual series in ``u`` is
    known through ``order // q``.
    """
    cls = linear_classify(F)
    if cls.tag in (REGULAR, NON_REDUCED):
        raise NonReducedError(f"normalization needs a reduced singular point, got {cls.tag}")
    lam = ZERO if cls.tag == SADDLE_NODE else cls.lam
    lam_class, p, q = resonance_data(lam)
    D = working_degree(order, p, q)
    G, S = briot_bouquet_straighten(F, D)
    h = axes_coefficient(G)
    kr = kill_nonresonant_terms(h, order, lam)
    tr = kr.transform
    K = tr.as_map()
    f = kr.residual
    if lam_class == NON_RESONANT or f.valuation() is None:
        if lam_class == ZERO_CLASS:
            raise InsufficientOrderError("saddle-node with vanishing residual through the working order")
        inv = NormalFormInvariants(lam, lam_class, p, q, linearizable=True, certified_order=order)
        model = axes_germ(Jet2.const(lam, D, True))
        return NormalFormResult(inv, tr, S, S.compose(K), model, f, f)
    k = f.valuation()
    if 2 * k > f.order:
        raise InsufficientOrderError(f"alpha needs order >= {2 * k * q}, got {order}")
    alpha = -residue(f)
    inv = NormalFormInvariants(lam, lam_class, p, q, k, alpha, False, order)
    c = f[k]
    beta = _kth_root(c.inverse(), k)
    if beta is None:
        tr.complete = False
        return NormalFormResult(inv, tr, S, None, None, f)
    # u = beta * phi1(U), then (x, y) = (a X, gamma Y W(U)) with a^p gamma^q = beta
    f_beta = Jet1([f[j] * beta ** j for j in range(f.order + 1)])
    # target du / (u^{k+1} (1 + alpha u^k)), whose residue is -alpha
    model_target = Jet1([ONE] + [ZERO] * (k - 1) + [alpha], f.order - k).unit_inverse()
    phi1, _, _ = normalize_oneform_1var(f_beta, lambda _res: model_target)
    W = jet1_power(phi1.shift(-1), Fraction(1, q))
    if p == 0:
        a, gamma = ONE, beta
    else:
        s, t = _bezout(p, q)
        a, gamma = beta ** s, beta ** t
    X, Y = Jet2.x(D, True), Jet2.y(D, True)
    U = Jet2.monomial(p, q, 1, D, True)
    Wj = Jet2.from_jet1(W, "x", D).substitute(U, Y) if W.order else Jet2.const(1, D, True)
    Wj = Jet2(Wj.terms, D, False)
    final = Map2(X * a, Y * Wj * gamma)
    full = S.compose(K).compose(final)
    g_total = K.Y.substitute(final.X, final.Y)
    g_total = Jet2((g_total.shift(0, -1)).terms, D - 1, False)
    transform = TransverselyFormalTransform(g_total, a, tr.stages + ["final"], True)
    normalized = [ZERO] * (f.order + 1)
    normalized[k] = ONE
    normalized[2 * k] = alpha
    normalized = Jet1(normalized)
    model = resonant_model(p, q, k, alpha, D)
    return NormalFormResult(inv, transform, S, full, model, f, normalized)
