"""Reduction of a single foliation germ to reduced singularities by iterated blow-up."""

from __future__ import annotations

from .blowup import DEFAULT_DEPTH_LIMIT, ReductionTree, chart_children, transform_exceptional
from .errors import PreconditionError
from .germ import REGULAR, FoliationGerm, linear_classify

__all__ = ["seidenberg_reduce", "is_final", "reblow_reduced", "leaf_classes"]


def is_final(F: FoliationGerm) -> bool:
    cls = linear_classify(F)
    return cls.tag == REGULAR or cls.reduced


def _label(cls) -> str:
    return cls.tag if cls.lam is None else f"{cls.tag} lambda={cls.lam}"


def seidenberg_reduce(F: FoliationGerm, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> ReductionTree:
    """Blow up until every singular point is reduced.

    Every node stores its local germ, its linear class and the exceptional
    components through it.  A dicritical line is only followed at the singular
    points of the lifted germ; the remaining points of such a line are regular.
    """
    if not F.exact:
        raise PreconditionError("reduction needs exact polynomial data")
    tree = ReductionTree(depth_limit)
    root = tree.add(None, germ=F, exceptional=None)
    stack = [root]
    while stack:
        node = stack.pop()
        G = node.data["germ"]
        cls = linear_classify(G)
        node.data["class"] = cls
        node.data["label"] = _label(cls)
        if cls.tag == REGULAR or cls.reduced:
            continue
        node.status = "blown-up"
        children = []
        for chart, point, res, local in chart_children(G):
            exc = transform_exceptional(node.data.get("exceptional"), chart, point, G.order)
            child = tree.add(node, chart, point, germ=local, exceptional=exc,
                             dicritical=res.dicritical, exceptional_multiplicity=res.multiplicity)
            children.append(child)
        if not children:
            node.data["label"] += " (dicritical, no singular point left)"
        # depth-first in the deterministic order of the points
        stack.extend(reversed(children))
    return tree


def leaf_classes(tree: ReductionTree):
    return [n.data["class"] for n in tree.leaves()]


def reblow_reduced(F: FoliationGerm) -> bool:
    """Blow up a final point once more and check that only reduced points appear."""
    return all(is_final(local) for *_, local in chart_children(F))
