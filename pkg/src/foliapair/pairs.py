"""Simultaneous reduction of a pair of foliations and classification of the local models."""

from __future__ import annotations

from dataclasses import dataclass, field

from .blowup import (CHART_X, CHART_Y, DEFAULT_DEPTH_LIMIT, ReductionTree, _restrict_to_exceptional,
                     blowup_foliation, roots_on_exceptional, singular_points_on_exceptional,
                     transform_exceptional)
from .errors import ClassificationError, PreconditionError
from .germ import (REGULAR, SADDLE_NODE, BranchJet, DivisorGerm, FoliationGerm, LinearClass,
                   eigen_directions, linear_classify, separatrix_jets, tangency_divisor)
from .scalar import ONE, ZERO, ExactScalar
from .series import Jet1, Jet2

__all__ = [
    "PAIR_TAGS", "PairType", "GammaBranch", "PairReductionReport", "pair_reduce",
    "classify_pair_point", "local_gamma", "leaf_jet", "smooth_branch_jet",
]

PAIR_TAGS = ("T1", "T2", "T3", "T4", "T5_1", "T5_2", "T5_3", "T6")
OWN_T, OWN_1, OWN_2 = "T", "G1", "G2"


@dataclass(frozen=True)
class PairType:
    tag: str
    k: int | None = None
    l: int | None = None
    lam: tuple = ()
    singular: tuple = ()
    orientation: tuple = ()
    reduced_tangency: bool | None = None

    def __post_init__(self):
        if self.tag not in PAIR_TAGS:
            raise ValueError(f"unknown pair type {self.tag!r}")
        # multiplicities may arrive as sympy integers
        for name in ("k", "l"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, int(v))

    def to_dict(self) -> dict:
        out = {"tag": self.tag}
        if self.k is not None:
            out["k"] = self.k
        if self.l is not None:
            out["l"] = self.l
        if self.lam:
            out["lambda"] = [None if z is None else str(z) for z in self.lam]
        if self.singular:
            out["singular"] = list(self.singular)
        if self.orientation:
            out["orientation"] = list(self.orientation)
        if self.reduced_tangency is not None:
            out["reduced_tangency"] = self.reduced_tangency
        return out


# ---------------------------------------------------------------------------
# smooth curve jets


def _param_for(tx, ty):
    return ("y", ty / tx) if tx else ("x", ZERO)


def smooth_branch_jet(eq: Jet2, order: int) -> BranchJet:
    """Parametrize the smooth curve ``eq = 0`` as a graph, by the implicit function theorem."""
    ex, ey = eq.coeff(1, 0), eq.coeff(0, 1)
    if eq.constant_term() or not (ex or ey):
        raise PreconditionError("branch is not smooth at the origin")
    # tangent direction (ey, -ex)
    param, lead, slope = ("y", ey, -ex / ey) if ey else ("x", ex, ZERO)
    coeffs = [ZERO, slope]
    for n in range(2, order + 1):
        r = eq.along_curve(Jet1(coeffs + [ZERO], n), param)[n]
        coeffs.append(-r / lead)
    return BranchJet(param, Jet1(coeffs, order))


def leaf_jet(F: FoliationGerm, order: int) -> BranchJet:
    """Leaf through the origin of a regular germ."""
    a0, b0 = F.a.constant_term(), F.b.constant_term()
    if not (a0 or b0):
        raise PreconditionError("leaf_jet needs a regular point")
    # the leaf is tangent to the kernel (b0, -a0) of omega(0)
    param, lead = ("y", b0) if b0 else ("x", a0)
    coeffs = [ZERO]
    for n in range(1, order + 1):
        r = BranchJet(param, Jet1(coeffs + [ZERO], n)).residual(F)[n - 1]
        coeffs.append(-r / (n * lead))
    return BranchJet(param, Jet1(coeffs, order))


def _same_curve(u: BranchJet, v: BranchJet) -> bool:
    if u.param != v.param:
        return False
    n = min(u.order, v.order)
    return all(u.s[k] == v.s[k] for k in range(n + 1))


def _transversal(u: BranchJet, v: BranchJet) -> bool:
    """Distinct tangent lines at the origin."""
    (a, b), (c, d) = u.tangent, v.tangent
    return bool(a * d - b * c)


# ---------------------------------------------------------------------------
# the local curve Gamma = Gamma1 + Gamma2 + T


@dataclass
class GammaBranch:
    jet: BranchJet
    owners: set = field(default_factory=set)
    multiplicity: int = 0  # multiplicity in T
    roles: dict = field(default_factory=dict)  # saddle-node roles per owner

    def label(self) -> str:
        return "+".join(sorted(self.owners))


@dataclass
class LocalPair:
    germs: tuple
    classes: tuple
    tangency: DivisorGerm
    gamma: list
    t_smooth: bool


def _add(gamma, jet, owner, mult=0, role=""):
    for g in gamma:
        if _same_curve(g.jet, jet):
            g.owners.add(owner)
            g.multiplicity = max(g.multiplicity, mult)
            if role:
                g.roles[owner] = role
            return g
    g = GammaBranch(jet, {owner}, mult, {owner: role} if role else {})
    gamma.append(g)
    return g


def local_gamma(F1: FoliationGerm, F2: FoliationGerm, order: int) -> LocalPair:
    """Branch ownership table of Gamma at the origin.

    Every smooth branch of T, every separatrix of a reduced singular germ and
    the leaf of a regular germ is listed once, with the set of curves
    (T, Gamma1, Gamma2) containing it through ``order``.
    """
    T = tangency_divisor(F1, F2)
    classes = (linear_classify(F1), linear_classify(F2))
    gamma: list[GammaBranch] = []
    t_smooth = True
    for br in T.branches:
        if br.order_at_origin() != 1:
            t_smooth = False
            continue
        _add(gamma, smooth_branch_jet(br.equation, order), OWN_T, br.multiplicity)
    for F, cls, owner in ((F1, classes[0], OWN_1), (F2, classes[1], OWN_2)):
        if cls.tag == REGULAR:
            _add(gamma, leaf_jet(F, order), owner)
        elif cls.reduced:
            for sep in separatrix_jets(F, order):
                _add(gamma, sep, owner, role=sep.role)
    return LocalPair((F1, F2), classes, T, gamma, t_smooth)


def trichotomy_holds(lp: LocalPair) -> bool:
    """Each branch is owned by T only, by one Gamma_i only, or by all three."""
    allowed = ({OWN_T}, {OWN_1}, {OWN_2}, {OWN_T, OWN_1, OWN_2})
    return all(g.owners in allowed for g in lp.gamma)


def tangency_contained(lp: LocalPair) -> bool:
    """Support of T lies in Gamma (branch by branch through the jet order)."""
    t_branches = [g for g in lp.gamma if OWN_T in g.owners]
    return lp.t_smooth and len(t_branches) == len(lp.tangency.branches)


# ---------------------------------------------------------------------------
# classification


_OPPOSITE = "opposite-saddle-nodes"


def _lam_real_nonpositive(z: ExactScalar) -> bool:
    return z.is_real() and z.real_sign() <= 0


def _nc(branches) -> bool:
    return len(branches) < 2 or (len(branches) == 2 and _transversal(branches[0].jet, branches[1].jet))


def _try_classify(lp: LocalPair):
    """PairType, ``None`` (blow up) or the opposite saddle-node marker."""
    c1, c2 = lp.classes
    if not lp.t_smooth:
        return None
    if any(c.tag != REGULAR and not c.reduced for c in lp.classes):
        return None
    ts = [g for g in lp.gamma if OWN_T in g.owners]
    if not _nc(ts):
        return None
    everyone = {OWN_T, OWN_1, OWN_2}
    if any(g.owners not in ({OWN_T}, everyone) for g in ts):
        return None
    leaves = [g for g in lp.gamma if g.owners & {OWN_1, OWN_2} and OWN_T not in g.owners]

    if c1.tag == REGULAR and c2.tag == REGULAR:
        if not ts:
            return PairType("T1")
        shared = [g for g in ts if g.owners == everyone]
        only_t = [g for g in ts if g.owners == {OWN_T}]
        transversal = all(_transversal(g.jet, leaf.jet) for g in only_t for leaf in leaves)
        if not transversal:
            return None
        if len(ts) == 1:
            g = ts[0]
            return PairType("T3" if shared else "T2", k=g.multiplicity)
        if len(shared) == 1 and len(only_t) == 1:
            return PairType("T4", k=only_t[0].multiplicity, l=shared[0].multiplicity)
        return None

    if (c1.tag == REGULAR) != (c2.tag == REGULAR):
        s_idx = 1 if c1.tag == REGULAR else 0
        cls = lp.classes[s_idx]
        if len(ts) != 1 or ts[0].owners != everyone:
            return None
        C = ts[0]
        owner_s = (OWN_1, OWN_2)[s_idx]
        if cls.tag == SADDLE_NODE:
            if C.roles.get(owner_s) == "strong":
                return PairType("T5_3", k=C.multiplicity - 1, lam=(ZERO,), singular=(s_idx + 1,))
            return PairType("T5_2", k=C.multiplicity, lam=(ZERO,), singular=(s_idx + 1,))
        lam = _lam_along(lp.germs[s_idx], C.jet, cls)
        tag = "T5_2" if _lam_real_nonpositive(lam) else "T5_1"
        return PairType(tag, k=C.multiplicity, lam=(lam,), singular=(s_idx + 1,))

    # both singular and reduced
    if len(ts) != 2 or any(g.owners != everyone for g in ts):
        return None
    orientation = ()
    if c1.tag == SADDLE_NODE and c2.tag == SADDLE_NODE:
        strong = [[g.roles.get(o) == "strong" for g in ts] for o in (OWN_1, OWN_2)]
        if strong[0] != strong[1]:
            return _OPPOSITE
    if SADDLE_NODE in (c1.tag, c2.tag):
        orientation = tuple(f"{g.roles.get(OWN_1, '-')}/{g.roles.get(OWN_2, '-')}" for g in ts)
    return PairType("T6", lam=(c1.lam, c2.lam), singular=(1, 2), orientation=orientation,
                    reduced_tangency=all(g.multiplicity == 1 for g in ts))


def _lam_along(F: FoliationGerm, C: BranchJet, cls: LinearClass) -> ExactScalar:
    """Eigenvalue along ``C`` over the transverse eigenvalue (the model's lambda)."""
    dirs = eigen_directions(F)
    tx, ty = C.tangent
    for mu, (dx, dy) in dirs:
        if not (dx * ty - dy * tx):
            other = [m for m, e in dirs if e != (dx, dy)][0]
            return mu / other
    return cls.lam


def classify_pair_point(F1: FoliationGerm, F2: FoliationGerm, order: int = 12) -> PairType:
    """Local type of the pair at the origin; the configuration must already be final."""
    res = _try_classify(local_gamma(F1, F2, order))
    if not isinstance(res, PairType):
        raise ClassificationError("the pair is not of one of the six final types at this point")
    return res


# ---------------------------------------------------------------------------
# reduction


@dataclass
class PairReductionReport:
    tree: ReductionTree
    leaf_types: dict
    depth: int
    extra_blowups: list

    @property
    def reduced_tangency_flags(self) -> dict:
        return {nid: t.reduced_tangency for nid, t in self.leaf_types.items() if t.tag == "T6"}

    def tags(self):
        return [self.leaf_types[n.id].tag for n in self.tree.leaves()]


def _exceptional_line(chart: str, order: int) -> Jet2:
    return Jet2.x(order, True) if chart == CHART_X else Jet2.y(order, True)


def _candidate_points(F1, F2, b1, b2):
    """Chart-X points of E where the lifted pair can differ from its generic behaviour."""
    pts = {}
    D = b1.germ.D if b1.germ.D is not None else b2.germ.D
    for b in (b1, b2):
        for t0 in singular_points_on_exceptional(b):
            pts[t0.key()] = t0
        if b.dicritical:
            B = _restrict_to_exceptional(b.germ.b, CHART_X)
            for t0 in roots_on_exceptional([B], D):
                pts[t0.key()] = t0
    f = b1.germ.wedge(b2.germ)
    if f:
        r = f.shift(-(f.x_valuation() or 0), 0)
        for t0 in roots_on_exceptional([_restrict_to_exceptional(r, CHART_X)], D):
            pts[t0.key()] = t0
    return [pts[k] for k in sorted(pts)]


def _is_special(lp: LocalPair, res, chart: str, order: int) -> bool:
    if not isinstance(res, PairType):
        return True
    if any(c.tag != REGULAR for c in lp.classes):
        return True
    E = smooth_branch_jet(_exceptional_line(chart, order), order)
    return any(OWN_T in g.owners and not _same_curve(g.jet, E) for g in lp.gamma)


def pair_reduce(F1: FoliationGerm, F2: FoliationGerm, order: int = 12,
                depth_limit: int = DEFAULT_DEPTH_LIMIT) -> PairReductionReport:
    """Blow up until every point of the lifted pair is of one of the six local types."""
    if not (F1.exact and F2.exact):
        raise PreconditionError("pair reduction needs exact polynomial data")
    tangency_divisor(F1, F2)  # rejects identical foliations
    tree = ReductionTree(depth_limit)
    root = tree.add(None, germs=(F1, F2), exceptional=None)
    leaf_types: dict = {}
    extra: list = []
    stack = [(root, _analyse(F1, F2, order))]
    while stack:
        node, (lp, res) = stack.pop()
        node.data["classes"] = lp.classes
        node.data["gamma"] = [(g.label(), g.multiplicity) for g in lp.gamma]
        node.data["local"] = lp
        if isinstance(res, PairType):
            leaf_types[node.id] = res
            node.data["label"] = res.tag
            continue
        node.status = "blown-up"
        node.data["label"] = "blow-up"
        if res == _OPPOSITE:
            node.data["label"] = "opposite saddle-nodes: extra blow-up"
            extra.append(node.id)
        G1, G2 = node.data["germs"]
        children = []
        bx1, bx2 = blowup_foliation(G1, CHART_X), blowup_foliation(G2, CHART_X)
        sites = [(CHART_X, t0, bx1, bx2) for t0 in _candidate_points(G1, G2, bx1, bx2)]
        sites.append((CHART_Y, ZERO, blowup_foliation(G1, CHART_Y), blowup_foliation(G2, CHART_Y)))
        for chart, t0, r1, r2 in sites:
            H1 = r1.germ.translate(ZERO, t0) if t0 else r1.germ
            H2 = r2.germ.translate(ZERO, t0) if t0 else r2.germ
            lp_c, res_c = _analyse(H1, H2, order)
            if not _is_special(lp_c, res_c, chart, order):
                continue
            exc = transform_exceptional(node.data.get("exceptional"), chart, t0, order)
            child = tree.add(node, chart, t0, germs=(H1, H2), exceptional=exc,
                             dicritical=(r1.dicritical, r2.dicritical))
            children.append((child, (lp_c, res_c)))
        stack.extend(reversed(children))
    return PairReductionReport(tree, leaf_types, tree.depth(), extra)


def _analyse(F1, F2, order):
    lp = local_gamma(F1, F2, order)
    return lp, _try_classify(lp)
