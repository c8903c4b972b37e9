"""Point blow-ups of foliation germs and curve germs, and the reduction tree."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DepthLimitError, InconclusiveError, PreconditionError
from .germ import Branch, DivisorGerm, FoliationGerm, divisor_of, normalize_equation
from .scalar import ONE, ZERO, ExactScalar
from .series import Jet2

__all__ = [
    "CHART_X", "CHART_Y", "BlowUpResult", "blowup_foliation", "blowup_curve",
    "normal_crossing_test", "resolve_curve", "ReductionTree", "Node", "chart_map",
    "singular_points_on_exceptional", "DEFAULT_DEPTH_LIMIT", "roots_on_exceptional",
    "point_germ", "exceptional_ratio",
]

CHART_X = "chart-X"  # (x, y) = (x, t x), exceptional divisor {x = 0}
CHART_Y = "chart-Y"  # (x, y) = (s y, y), exceptional divisor {y = 0}
DEFAULT_DEPTH_LIMIT = 24


def chart_map(chart: str, order: int = 12, exact: bool = True):
    x, y = Jet2.x(order, exact), Jet2.y(order, exact)
    if chart == CHART_X:
        return x, x * y
    if chart == CHART_Y:
        return x * y, y
    raise ValueError(f"unknown chart {chart!r}")


@dataclass(frozen=True)
class BlowUpResult:
    germ: FoliationGerm
    multiplicity: int
    dicritical: bool
    unnecessary: bool = False


def _exceptional_power(certificate, chart):
    return certificate[0] if chart == CHART_X else certificate[1]


def blowup_foliation(F: FoliationGerm, chart: str) -> BlowUpResult:
    """Lift ``F`` to one chart of the blow-up of the origin.

    The pulled-back form is divided by the largest power of the exceptional
    coordinate; ``dicritical`` reports that the exceptional line is not
    invariant.
    """
    X, Y = chart_map(chart, F.order, True)
    a, b = F.pullback_raw(X, Y)
    G = FoliationGerm(a, b)
    m = _exceptional_power(G.certificate, chart)
    if chart == CHART_X:
        # tangent of {x=0} is d/dt, so invariance means b(0, t) == 0
        dicritical = any(i == 0 for i, _ in G.b.terms)
    else:
        dicritical = any(j == 0 for _, j in G.a.terms)
    G = FoliationGerm(G.a, G.b)
    return BlowUpResult(G, m, dicritical, unnecessary=not F.is_singular())


def _restrict_to_exceptional(j: Jet2, chart: str):
    """Coefficients of j along E: j(0, t) in chart X, j(s, 0) in chart Y."""
    if chart == CHART_X:
        deg = max((k for i, k in j.terms if i == 0), default=0)
        return [j.coeff(0, k) for k in range(deg + 1)]
    deg = max((i for i, k in j.terms if k == 0), default=0)
    return [j.coeff(i, 0) for i in range(deg + 1)]


def roots_on_exceptional(polys, D=None):
    """Distinct exact roots (chart-X coordinate t) of the given univariate polynomials."""
    from ._sympy_bridge import univariate_roots

    found = {}
    for coeffs in polys:
        if not any(coeffs) or len([c for c in coeffs if c]) == 0:
            continue
        if all(not c for c in coeffs[1:]):
            continue
        for r, _ in univariate_roots(coeffs, D):
            found[r.key()] = r
    return [found[k] for k in sorted(found)]


def exceptional_ratio(F: FoliationGerm, chart: str):
    """Eigenvalue along the exceptional line over the transverse one.

    This is the ratio that reads ``lam - 1`` and ``(1 - lam)/lam`` at the two
    chart origins over ``x dy - lam y dx``.  ``None`` when the transverse
    eigenvalue vanishes or the line is not invariant.
    """
    (m00, m01), (m10, m11) = F.linear_part()
    if chart == CHART_X:
        if m01:
            return None
        along = m11
    else:
        if m10:
            return None
        along = m00
    across = m00 + m11 - along
    if not across:
        return None
    return along / across


def singular_points_on_exceptional(blown: BlowUpResult):
    """Chart-X coordinates of singular points on E, plus whether the chart-Y origin is singular."""
    G = blown.germ
    A = _restrict_to_exceptional(G.a, CHART_X)
    B = _restrict_to_exceptional(G.b, CHART_X)
    D = G.D
    candidates = roots_on_exceptional([A], D) if any(A) else roots_on_exceptional([B], D)
    pts = [t for t in candidates if not _eval(A, t) and not _eval(B, t)]
    return pts


def _eval(coeffs, t):
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def point_germ(F: FoliationGerm, chart: str, point=ZERO):
    """Blow up ``F`` and recentre at ``point`` on the exceptional divisor."""
    res = blowup_foliation(F, chart)
    G = res.germ
    if point:
        if chart != CHART_X:
            raise PreconditionError("only the chart-Y origin is addressed in chart Y")
        G = G.translate(ZERO, point)
    return res, G


# ---------------------------------------------------------------------------
# curves


def _strict_transform(eq: Jet2, chart: str):
    X, Y = chart_map(chart, eq.order, True)
    g = eq.substitute(X, Y)
    m = eq.valuation() or 0
    g = g.shift(-m, 0) if chart == CHART_X else g.shift(0, -m)
    return g, m


def blowup_curve(C: DivisorGerm, chart: str, point=ZERO) -> DivisorGerm:
    """Total transform of ``C`` localized at ``point`` of the exceptional line in ``chart``.

    Strict transforms that miss the point are dropped; the exceptional branch
    carries the multiplicity of ``C`` at the origin.
    """
    if C.is_empty:
        raise PreconditionError("blow-up of an empty curve germ")
    exact = all(br.equation.exact for br in C.branches)
    order = min(br.equation.order for br in C.branches)
    branches = []
    exc_mult = 0
    for br in C.branches:
        g, m = _strict_transform(br.equation, chart)
        exc_mult += m * br.multiplicity
        if point:
            g = g.translate(ZERO, point)
        if g.constant_term():
            continue
        if g.exact:
            for sub in divisor_of(g).branches:
                branches.append(Branch(sub.equation, sub.multiplicity * br.multiplicity, br.kind))
        else:
            branches.append(Branch(normalize_equation(g), br.multiplicity, br.kind))
    exc = Jet2.x(order, exact) if chart == CHART_X else Jet2.y(order, exact)
    if exc_mult:
        branches.append(Branch(exc, exc_mult, "exceptional"))
    return _merge(branches, exact)


def _merge(branches, exact=True) -> DivisorGerm:
    merged: dict = {}
    kinds: dict = {}
    for br in branches:
        k = br.equation
        merged[k] = merged.get(k, 0) + br.multiplicity
        kinds.setdefault(k, br.kind)
    out = [Branch(eq, m, kinds[eq]) for eq, m in merged.items()]
    from .germ import _sort_branches
    return DivisorGerm(_sort_branches(out), exact)


def _line_key(cone: dict):
    """Projective class of a linear form c1 x + c2 y as a hashable key."""
    c1 = cone.get((1, 0), ZERO)
    c2 = cone.get((0, 1), ZERO)
    if c2:
        return ("y", (c1 / c2).key())
    return ("x", ONE.key())


def normal_crossing_test(C: DivisorGerm) -> bool:
    """At most two smooth branches with distinct tangents (a node counts)."""
    total = 0
    lines = []
    for br in C.branches:
        eq = br.equation
        v = eq.valuation()
        if v is None:
            raise InconclusiveError("branch equation vanishes through the working order")
        if not eq.exact and v > eq.order:
            raise InconclusiveError("branch order exceeds the working order")
        if v == 0:
            continue
        total += v
        if total > 2:
            return False
        if v == 1:
            lines.append(_line_key(eq.homogeneous(1)))
        else:
            q = eq.homogeneous(2)
            a, b, c = q.get((2, 0), ZERO), q.get((1, 1), ZERO), q.get((0, 2), ZERO)
            if not (b * b - 4 * a * c):
                return False
    return len(lines) < 2 or lines[0] != lines[1]


# ---------------------------------------------------------------------------
# reduction trees


@dataclass
class Node:
    id: int
    parent: int | None
    chart: str | None
    point: ExactScalar | None
    depth: int
    data: dict = field(default_factory=dict)
    status: str = "leaf"
    children: list = field(default_factory=list)


class ReductionTree:
    """Rooted tree of blow-up charts; each edge blows up the parent's marked point."""

    def __init__(self, depth_limit: int = DEFAULT_DEPTH_LIMIT):
        self.nodes: list[Node] = []
        self.depth_limit = depth_limit

    def add(self, parent: Node | None, chart=None, point=None, **data) -> Node:
        depth = 0 if parent is None else parent.depth + 1
        if depth > self.depth_limit:
            raise DepthLimitError(f"more than {self.depth_limit} blow-ups along one branch")
        node = Node(len(self.nodes), None if parent is None else parent.id, chart, point, depth, dict(data))
        self.nodes.append(node)
        if parent is not None:
            parent.children.append(node.id)
            parent.status = "blown-up"
        return node

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def leaves(self):
        return [n for n in self.nodes if n.status == "leaf"]

    def depth(self) -> int:
        return max((n.depth for n in self.nodes), default=0)

    def blowup_count(self) -> int:
        return sum(1 for n in self.nodes if n.status != "leaf")

    def chart_stack(self, node: Node):
        out = []
        while node.parent is not None:
            out.append((node.chart, node.point))
            node = self.nodes[node.parent]
        return list(reversed(out))

    def describe_stack(self, node: Node) -> str:
        parts = []
        for chart, point in self.chart_stack(node):
            parts.append(f"{chart}@{point}")
        return " > ".join(parts) or "root"

    def to_dot(self, label=None) -> str:
        label = label or (lambda n: n.data.get("label", ""))
        lines = ["digraph reduction {", "  node [shape=box, fontname=monospace];"]
        for n in self.nodes:
            text = f"{self.describe_stack(n)}\\n{label(n)}".replace('"', "'")
            lines.append(f'  n{n.id} [label="{text}"];')
        for n in self.nodes:
            if n.parent is not None:
                lines.append(f'  n{n.parent} -> n{n.id} [label="{n.chart} t={n.point}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def resolve_curve(C: DivisorGerm, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> ReductionTree:
    """Embedded resolution of a polynomial curve germ to normal crossings."""
    if C.is_empty:
        raise PreconditionError("resolution of an empty curve germ")
    if not all(br.equation.exact for br in C.branches):
        raise PreconditionError("curve resolution needs exact polynomial data")
    tree = ReductionTree(depth_limit)
    root = tree.add(None, divisor=C)
    _resolve_node(tree, root, C)
    return tree


def curve_points_on_exceptional(C: DivisorGerm):
    """Chart-X points of E met by strict transforms (exceptional branch excluded)."""
    polys = []
    D = None
    for br in C.branches:
        g, _ = _strict_transform(br.equation, CHART_X)
        D = D if D is not None else g.D
        polys.append(_restrict_to_exceptional(g, CHART_X))
    return roots_on_exceptional(polys, D)


def _resolve_node(tree: ReductionTree, node: Node, C: DivisorGerm):
    nc = normal_crossing_test(C)
    node.data["normal_crossing"] = nc
    node.data["label"] = "NC" if nc else "blow-up"
    if nc:
        return
    node.status = "blown-up"
    for t0 in curve_points_on_exceptional(C):
        child_div = blowup_curve(C, CHART_X, t0)
        child = tree.add(node, CHART_X, t0, divisor=child_div)
        _resolve_node(tree, child, child_div)
    child_div = blowup_curve(C, CHART_Y)
    if sum(1 for br in child_div.branches) > 1 or any(br.kind != "exceptional" for br in child_div.branches):
        child = tree.add(node, CHART_Y, ZERO, divisor=child_div)
        _resolve_node(tree, child, child_div)


def transform_exceptional(exc: DivisorGerm | None, chart: str, point=ZERO, order: int = 12) -> DivisorGerm:
    """Exceptional configuration at a point of the new exceptional line.

    Old exceptional components are carried by their strict transforms; the new
    line enters with multiplicity one (a reduced exceptional divisor).
    """
    branches = []
    if exc is not None and not exc.is_empty:
        for br in exc.branches:
            g, _ = _strict_transform(br.equation, chart)
            if point:
                g = g.translate(ZERO, point)
            if not g.constant_term():
                branches.append(Branch(normalize_equation(g), 1, "exceptional"))
    new = Jet2.x(order, True) if chart == CHART_X else Jet2.y(order, True)
    branches.append(Branch(new, 1, "exceptional"))
    return _merge(branches)


def chart_children(F: FoliationGerm):
    """Blow up ``F`` and list ``(chart, point, result, local germ)`` for every singular point on E.

    Points are visited in chart X by increasing exact coordinate, then the
    chart-Y origin (the direction t = infinity).
    """
    out = []
    bx = blowup_foliation(F, CHART_X)
    for t0 in singular_points_on_exceptional(bx):
        G = bx.germ.translate(ZERO, t0) if t0 else bx.germ
        out.append((CHART_X, t0, bx, G))
    by = blowup_foliation(F, CHART_Y)
    if by.germ.is_singular():
        out.append((CHART_Y, ZERO, by, by.germ))
    return out
