"""Command-line driver: parse inputs, run one pipeline, emit a JSON report.

Reports are deterministic: keys are sorted, scalars are exact strings and
wall-clock timing is only included on request (``--timing``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .blowup import DEFAULT_DEPTH_LIMIT, ReductionTree
from .errors import FoliaError, PreconditionError
from .germ import linear_classify, tangency_divisor
from .holonomy import diffeo_formal_invariants, formal_conjugacy_decide, holonomy_jet, verify_pair_conjugacy
from .maps import Map2
from .normal_form import formal_normalize
from .pairs import pair_reduce
from .parser import format_polynomial, format_scalar, parse_expression, parse_polynomial
from .seidenberg import seidenberg_reduce
from .series import DEFAULT_ORDER, Jet2

log = logging.getLogger("foliapair")

SCHEMA_VERSION = "1.0"

PIPELINES = {
    # name: number of input slots
    "classify": 1,
    "seidenberg": 1,
    "pair-reduce": 2,
    "normal-form": 1,
    "holonomy": 1,
    "conjugacy-decide": 2,
    "verify-conjugacy": 6,
}

TREE_PIPELINES = ("seidenberg", "pair-reduce")


@dataclass
class InputDocument:
    pipeline: str
    slots: list
    order: int = DEFAULT_ORDER
    depth_limit: int = DEFAULT_DEPTH_LIMIT
    timing: bool = False
    extra: dict = field(default_factory=dict)


def split_slots(text: str) -> list:
    """Slots are separated by ``;`` or newlines; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        out.extend(part.strip() for part in line.split(";"))
    return [s for s in out if s]


# ---------------------------------------------------------------------------
# serialization


def _s(c) -> str | None:
    return None if c is None else format_scalar(c)


def _divisor(div) -> list:
    return [{"equation": format_polynomial(br.equation), "multiplicity": br.multiplicity,
             **({"kind": br.kind} if br.kind else {})} for br in div.branches]


def _class(cls) -> dict:
    out = {"tag": cls.tag, "trace": _s(cls.trace), "det": _s(cls.det)}
    if cls.lam is not None:
        out["lambda"] = _s(cls.lam)
    if cls.eigenvalues:
        out["eigenvalues"] = [_s(e) for e in cls.eigenvalues]
    return out


def _tree(tree: ReductionTree, leaf_info) -> dict:
    nodes = []
    for n in tree.nodes:
        entry = {"id": n.id, "parent": n.parent, "depth": n.depth, "status": n.status,
                 "chart": n.chart, "point": _s(n.point), "stack": tree.describe_stack(n),
                 "label": n.data.get("label", "")}
        if n.status == "leaf":
            entry.update(leaf_info(n))
        nodes.append(entry)
    return {"depth": tree.depth(), "blowups": tree.blowup_count(), "leaves": len(tree.leaves()),
            "nodes": nodes}


def _tau_jet(jet) -> str:
    terms = []
    for n, c in enumerate(jet.coeffs):
        if c:
            mono = "z" if n == 1 else f"z^{n}"
            terms.append(f"[{c}]*{mono}")
    return " + ".join(terms) or "0"


def _map(m: Map2) -> dict:
    return {"x": format_polynomial(m.X), "y": format_polynomial(m.Y)}


# ---------------------------------------------------------------------------
# pipelines


def _germs(doc: InputDocument, n: int):
    return [parse_expression(t, doc.order) for t in doc.slots[:n]]


def _run_classify(doc, out):
    F, = _germs(doc, 1)
    cls = linear_classify(F)
    out["result"] = {"class": _class(cls), "singular": F.is_singular(),
                     "algebraic_multiplicity": F.algebraic_multiplicity()}


def _run_seidenberg(doc, out):
    F, = _germs(doc, 1)
    tree = seidenberg_reduce(F, doc.depth_limit)

    def leaf(n):
        info = {"germ": n.data["germ"].to_text()}
        if n.data.get("class") is not None:
            info["class"] = _class(n.data["class"])
        return info

    out["result"] = {"tree": _tree(tree, leaf)}
    return tree


def _run_pair_reduce(doc, out):
    F1, F2 = _germs(doc, 2)
    rep = pair_reduce(F1, F2, doc.order, doc.depth_limit)

    def leaf(n):
        return {"pair_type": rep.leaf_types[n.id].to_dict()}

    out["result"] = {"tangency": _divisor(tangency_divisor(F1, F2)), "tree": _tree(rep.tree, leaf),
                     "tags": rep.tags(), "extra_blowups": list(rep.extra_blowups)}
    return rep.tree


def _run_normal_form(doc, out):
    F, = _germs(doc, 1)
    res = formal_normalize(F, doc.order)
    tr = res.transform
    out["result"] = {
        "invariants": res.invariants.to_dict(),
        "transform": {"g": format_polynomial(tr.g), "x_scale": _s(tr.x_scale),
                      "stages": [str(s) for s in tr.stages], "complete": tr.complete},
        "normal_form": None if res.normal_germ is None else res.normal_germ.to_text(),
        "residual": [_s(c) for c in res.residual.coeffs],
    }


def _run_holonomy(doc, out):
    F, = _germs(doc, 1)
    inv = formal_normalize(F, doc.order).invariants
    k, q = inv.k or 0, inv.q or 1
    hol = holonomy_jet(inv, max(doc.order, 2 * k * q + 1))
    fc = diffeo_formal_invariants(hol.tangent, hol.descriptor)
    out["result"] = {"invariants": inv.to_dict(), "multiplier": hol.descriptor.to_dict(),
                     "tangent": _tau_jet(hol.tangent.jet), "iterate": _tau_jet(hol.iterate.jet),
                     "formal_class": fc.to_dict()}


def _run_conjugacy(doc, out):
    F, G = _germs(doc, 2)
    dec = formal_conjugacy_decide(F, G, doc.order)
    res = dec.to_dict()
    if dec.transform is not None:
        res["transform"] = _map(dec.transform)
        res["verified_through"] = doc.order - 1
    out["result"] = res


def _run_verify(doc, out):
    F1, F2, G1, G2 = _germs(doc, 4)
    X, Y = (parse_polynomial(t, doc.order) for t in doc.slots[4:6])
    phi = Map2(Jet2(X.terms, doc.order, True), Jet2(Y.terms, doc.order, True))
    ok = verify_pair_conjugacy(phi, (F1, F2), (G1, G2), doc.order)
    out["result"] = {"conjugates": ok, "verified_through": doc.order - 1, "transform": _map(phi)}


_RUNNERS = {
    "classify": _run_classify,
    "seidenberg": _run_seidenberg,
    "pair-reduce": _run_pair_reduce,
    "normal-form": _run_normal_form,
    "holonomy": _run_holonomy,
    "conjugacy-decide": _run_conjugacy,
    "verify-conjugacy": _run_verify,
}


def run_pipeline(doc: InputDocument):
    """Run ``doc.pipeline``; returns ``(report, exit_status, tree or None)``."""
    report = {
        "schema_version": SCHEMA_VERSION,
        "pipeline": doc.pipeline,
        "config": {"order": doc.order, "depth_limit": doc.depth_limit},
        "input": list(doc.slots),
    }
    tree = None
    start = time.perf_counter()
    try:
        if doc.pipeline not in PIPELINES:
            raise PreconditionError(f"unknown pipeline {doc.pipeline!r}")
        need = PIPELINES[doc.pipeline]
        if len(doc.slots) != need:
            raise PreconditionError(f"{doc.pipeline} takes {need} input slot(s), got {len(doc.slots)}")
        tree = _RUNNERS[doc.pipeline](doc, report)
        report["status"] = "ok"
        status = 0
    except FoliaError as exc:
        log.debug("pipeline failed", exc_info=True)
        report["status"] = "error"
        report["error"] = {"code": exc.code, "message": str(exc)}
        status = exc.exit_status
    if doc.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    return report, status, tree


# ---------------------------------------------------------------------------
# argument handling


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="foliapair", description="Reduction and formal invariants of plane foliation germs.")
    p.add_argument("--pipeline", choices=sorted(PIPELINES), help="pipeline to run (default: classify)")
    p.add_argument("--input", help="input file, or inline expressions separated by ';'")
    p.add_argument("--order", type=int, help=f"jet order N (default {DEFAULT_ORDER})")
    p.add_argument("--depth-limit", type=int, help=f"blow-up depth limit (default {DEFAULT_DEPTH_LIMIT})")
    p.add_argument("--config", help="JSON file with defaults for the options above")
    p.add_argument("--emit-dot", metavar="PATH", help="write the reduction tree as DOT")
    p.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _read_input(source: str) -> str:
    path = Path(source)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    return source


def document_from_args(args) -> InputDocument:
    """Flags override the config file, which overrides the defaults."""
    conf = {}
    if args.config:
        try:
            conf = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise PreconditionError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(conf, dict):
            raise PreconditionError("config must be a JSON object")

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return conf.get(key, default)

    text = pick(args.input, "input", None)
    if text is None:
        raise PreconditionError("no input given")
    if isinstance(text, list):
        slots = [str(t) for t in text]
    else:
        slots = split_slots(_read_input(str(text)))
    order = int(pick(args.order, "order", DEFAULT_ORDER))
    depth = int(pick(args.depth_limit, "depth_limit", DEFAULT_DEPTH_LIMIT))
    if order < 1 or depth < 0:
        raise PreconditionError("order must be positive and the depth limit non-negative")
    return InputDocument(pick(args.pipeline, "pipeline", "classify"), slots, order, depth,
                         bool(args.timing or conf.get("timing", False)))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc = document_from_args(args)
    except FoliaError as exc:
        report = {"schema_version": SCHEMA_VERSION, "status": "error",
                  "error": {"code": exc.code, "message": str(exc)}}
        sys.stdout.write(dumps(report))
        return exc.exit_status
    report, status, tree = run_pipeline(doc)
    text = dumps(report)
    sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    if args.emit_dot:
        if tree is not None:
            Path(args.emit_dot).write_text(tree.to_dot(), encoding="utf-8")
        elif doc.pipeline not in TREE_PIPELINES:
            log.warning("--emit-dot ignored: %s builds no tree", doc.pipeline)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
