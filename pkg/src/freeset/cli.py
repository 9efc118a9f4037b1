"""Command-line interface.

Exit codes: 0 success, 2 validation failure, 3 solver failure, 4 I/O failure.
Failures print one JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .agraph import (
    Tolerances,
    draw_a_graph,
    morph_frames,
    outer_shape_for_targets,
    validate_a_graph,
)
from .drawing import CrossingSequence, EdgeItem, Side, VertexItem, crossing_sequence_of, is_plane
from .embedding import ekey
from .errors import IO, SOLVER, VALIDATION, FreeSetError, IOFailure, SchemaError, TargetsNotIncreasing
from .harness import gen_a_graph, gen_triangulation_instance, random_agraph_targets
from .io import GraphDocument, parse_number, read_document, write_text
from .pipeline import FreeSetRequest, draw_collinear, realize_free_set
from .reducer import ReductionInstance, draw_triangulation
from .svg import SvgStyle, render_svg

EXIT = {VALIDATION: 2, SOLVER: 3, IO: 4}


# ---------------------------------------------------------------------------
# helpers


def _tolerances(doc: Optional[GraphDocument], pairs: Sequence[str]) -> Tolerances:
    vals: Dict[str, float] = {}
    if doc is not None:
        vals.update(doc.options.get("tolerances", {}))
    for kv in pairs:
        if "=" not in kv:
            raise SchemaError("tolerance must look like NAME=VALUE", value=kv)
        k, v = kv.split("=", 1)
        try:
            vals[k.strip()] = float(v)
        except ValueError:
            raise SchemaError("tolerance value is not a number", value=kv) from None
    known = set(Tolerances.__dataclass_fields__)
    bad = sorted(set(vals) - known)
    if bad:
        raise SchemaError("unknown tolerance", names=bad, known=sorted(known))
    return Tolerances().updated(**vals)


def _rational(args, doc: Optional[GraphDocument]) -> bool:
    return bool(args.rational) or (doc is not None and doc.rational)


def _options(rational: bool, tol: Tolerances) -> dict:
    return {"arithmetic": "rational" if rational else "float",
            "tolerances": {k: v for k, v in tol.__dict__.items() if Tolerances.__dataclass_fields__[k].default != v}}


def _emit(args, text: str) -> None:
    write_text(getattr(args, "output", None), text)


def _vertex_targets(doc: GraphDocument) -> List[Fraction]:
    by_v = {it.v: y for it, y in doc.targets if isinstance(it, VertexItem)}
    missing = [v for v in doc.collinear_set if v not in by_v]
    if missing:
        raise SchemaError("every collinear vertex needs a target", missing=[str(v) for v in missing])
    return [by_v[v] for v in doc.collinear_set]


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    doc = read_document(args.doc)
    report: Dict[str, object] = {"ok": True, "vertices": len(doc.vertices), "edges": len(doc.edges)}
    if all(p is not None for p in doc.vertices.values()):
        d = doc.drawing(rational=True)
        rep = is_plane(d)
        report["plane"] = rep.plane
        if not rep.plane:
            raise SchemaError("drawing has crossings", pairs=[[str(x) for x in p] for p in rep.pairs[:5]])
        report["collinear_on_axis"] = all(d.coords[v][0] == 0 for v in doc.collinear_set)
        if all(d.coords[v][0] != 0 for v in d.embedding.vertices if v not in set(doc.collinear_set)) \
                and d.embedding.m() > 0:
            try:
                a = validate_a_graph(d)
                report["agraph"] = {"m": a.m, "n": a.n, "n0": a.n0, "f3": a.f3, "f4": a.f4,
                                    "outer_case": a.outer_case.value}
            except FreeSetError:
                report["agraph"] = None
    else:
        doc.embedding()
    ys = [y for _, y in doc.targets]
    if any(not a < b for a, b in zip(ys, ys[1:])):
        vertex_only = all(isinstance(it, VertexItem) for it, _ in doc.targets)
        if vertex_only:
            raise TargetsNotIncreasing("targets must increase strictly")
    report["targets"] = len(doc.targets)
    print(json.dumps(report, sort_keys=True))
    return 0


def _trace_meta(args, trace) -> dict:
    return {"trace": trace.to_json()} if args.emit_trace else {}


def cmd_draw(args) -> int:
    doc = read_document(args.doc)
    rational = _rational(args, doc)
    tol = _tolerances(doc, args.tolerance)
    witness = doc.drawing(rational)
    meta: Dict[str, object] = {"command": "draw"}
    if any(isinstance(it, EdgeItem) for it, _ in doc.targets):
        seq = doc.crossing_sequence(rational)
        delta = {v: witness.coords[v] for v in witness.embedding.outer_vertices()}
        inst = ReductionInstance.create(witness.embedding, seq, delta, witness.sides(), rational)
        res = draw_triangulation(inst, rational=rational, tol=tol, eps_policy=args.eps_policy)
        out, trace = res.drawing, res.trace
        out_seq = seq
    else:
        req = FreeSetRequest(witness, tuple(doc.collinear_set), tuple(_vertex_targets(doc)))
        res = draw_collinear(req, rational, tol, eps_policy=args.eps_policy)
        out, trace = res.drawing, res.trace
        out_seq = CrossingSequence(tuple(VertexItem(v) for v in doc.collinear_set),
                                   tuple(_vertex_targets(doc)), 0)
    meta["steps"] = trace.histogram()
    meta.update(_trace_meta(args, trace))
    od = GraphDocument.from_drawing(out, doc.collinear_set, out_seq, options=_options(rational, tol),
                                    name=doc.extra.get("name", "drawing"), meta=meta)
    if doc.epsilon is not None:
        od.epsilon = doc.epsilon
    _emit(args, od.dumps())
    return 0


def _read_points(path: Optional[str], doc: GraphDocument) -> List[tuple]:
    if path is None:
        if "points" not in doc.extra:
            raise SchemaError("no target points: pass --points or add a points field")
        return list(doc.extra["points"])
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise IOFailure("cannot read points file", path=path, reason=str(exc)) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("points file is not JSON", reason=str(exc)) from None
    if isinstance(obj, dict):
        obj = obj.get("points")
    if not isinstance(obj, list) or any(not isinstance(p, (list, tuple)) or len(p) != 2 for p in obj):
        raise SchemaError("points must be a list of [x, y] pairs")
    return [(parse_number(p[0]), parse_number(p[1])) for p in obj]


def cmd_free(args) -> int:
    doc = read_document(args.doc)
    rational = _rational(args, doc)
    tol = _tolerances(doc, args.tolerance)
    pts = _read_points(args.points, doc)
    req = FreeSetRequest(doc.drawing(rational), tuple(doc.collinear_set), tuple(pts))
    res = realize_free_set(req, rational, tol)
    meta: Dict[str, object] = {"command": "free", "steps": res.trace.histogram(),
                               "assignment": {str(v): [str(p[0]), str(p[1])]
                                              for v, p in res.extra["assignment"].items()}}
    meta.update(_trace_meta(args, res.trace))
    od = GraphDocument.from_drawing(res.drawing, doc.collinear_set, None, options=_options(rational, tol),
                                    name=doc.extra.get("name", "drawing"), meta=meta, points=pts)
    _emit(args, od.dumps())
    return 0


def _agraph_targets(doc: GraphDocument, a) -> List[Fraction]:
    by_e = {it.e: y for it, y in doc.targets if isinstance(it, EdgeItem)}
    by_v = {it.v: y for it, y in doc.targets if isinstance(it, VertexItem)}
    d = a.witness
    obs = crossing_sequence_of(d, exact=True)
    own = {}
    for it, y in zip(obs.items, obs.targets):
        if isinstance(it, VertexItem):
            own[it.v] = y
        else:
            own[it.e] = y
    out = []
    for u, v in a.edge_order:
        e = ekey(u, v)
        ys = [w for w in (u, v) if a.sides[w] == Side.Y]
        if e in by_e:
            out.append(by_e[e])
        elif ys and ys[0] in by_v:
            out.append(by_v[ys[0]])
        elif not doc.targets:
            out.append(own[ys[0]] if ys else own[e])
        else:
            raise SchemaError("missing target for an edge", edge=[str(u), str(v)])
    return out


def cmd_agraph(args) -> int:
    doc = read_document(args.doc)
    rational = _rational(args, doc)
    tol = _tolerances(doc, args.tolerance)
    a = validate_a_graph(doc.drawing(rational))
    y = _agraph_targets(doc, a)
    delta = outer_shape_for_targets(a, y, rational)
    info: list = []
    out = draw_a_graph(a, y, delta, rational=rational, tol=tol, seed=args.seed, info=info)
    meta: Dict[str, object] = {"command": "agraph", "strategy": info[-1].strategy if info else None}
    if args.emit_trace and info and info[-1].trace is not None:
        meta["trace"] = [s.to_json() for s in info[-1].trace.steps]
    seq = CrossingSequence(tuple(EdgeItem(e) for e in a.edge_order), tuple(y), 0)
    od = GraphDocument.from_drawing(out, doc.collinear_set, seq, options=_options(rational, tol),
                                    name=doc.extra.get("name", "agraph"), meta=meta)
    _emit(args, od.dumps())
    return 0


def cmd_morph(args) -> int:
    doc = read_document(args.doc)
    rational = _rational(args, doc)
    tol = _tolerances(doc, args.tolerance)
    a = validate_a_graph(doc.drawing(rational))
    y = _agraph_targets(doc, a)
    delta = outer_shape_for_targets(a, y, rational)
    frames, trace = morph_frames(a, delta, y, args.frames, rational, tol)
    outdir = Path(args.output)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        hl = tuple(v for v in a.embedding.vertices if a.sides[v] == Side.Y)
        for k, d in enumerate(frames):
            (outdir / f"frame_{k:04d}.svg").write_bytes(render_svg(d, SvgStyle(highlight=hl)))
        (outdir / "trace.jsonl").write_text(trace.to_jsonl())
    except OSError as exc:
        raise IOFailure("cannot write morph output", path=str(outdir), reason=str(exc)) from None
    print(json.dumps({"frames": len(frames), "directory": str(outdir)}, sort_keys=True))
    return 0


def cmd_gen(args) -> int:
    if args.kind == "agraph":
        a = gen_a_graph(args.seed, args.size)
        y = random_agraph_targets(a, np.random.default_rng(args.seed))
        seq = CrossingSequence(tuple(EdgeItem(e) for e in a.edge_order), tuple(y), 0)
        ys = [v for v in a.embedding.vertices if a.sides[v] == Side.Y]
        doc = GraphDocument.from_drawing(a.witness, ys, seq, name=f"agraph-{args.seed}-{args.size}",
                                         meta={"kind": "agraph", "seed": args.seed, "size": args.size})
    else:
        smp = gen_triangulation_instance(args.seed, args.size)
        inst = smp.instance
        S = [it.v for it in inst.items if isinstance(it, VertexItem)]
        seq = CrossingSequence(tuple(inst.items), tuple(inst.targets), inst.eps)
        doc = GraphDocument.from_drawing(smp.witness, S, seq, name=f"tri-{args.seed}-{args.size}",
                                         meta={"kind": "triangulation", "seed": args.seed, "size": args.size})
    _emit(args, doc.dumps())
    return 0


def cmd_render(args) -> int:
    doc = read_document(args.doc)
    d = doc.drawing(rational=False)
    style = SvgStyle(width=args.width, height=args.width, labels=args.labels)
    data = render_svg(d, style, highlight=doc.collinear_set)
    if args.output in (None, "-"):
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()
    else:
        try:
            Path(args.output).write_bytes(data)
        except OSError as exc:
            raise IOFailure("cannot write file", path=args.output, reason=str(exc)) from None
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rational", action="store_true", help="exact rational arithmetic")
    common.add_argument("--tolerance", action="append", default=[], metavar="K=V",
                        help="override a numeric tolerance (rtol, ctol, pivot, target_rtol)")
    common.add_argument("--emit-trace", action="store_true", help="include the solver trace in the output")

    p = argparse.ArgumentParser(prog="freeset", description="Redraw plane graphs with a prescribed collinear set.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="schema and oracle checks")
    s.add_argument("doc")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("draw", parents=[common], help="collinear targets on the axis")
    s.add_argument("doc")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--eps-policy", choices=("window", "halve"), default="window")
    s.set_defaults(func=cmd_draw)

    s = sub.add_parser("free", parents=[common], help="place the collinear set on arbitrary points")
    s.add_argument("doc")
    s.add_argument("--points", default=None, help="JSON list of [x, y] pairs (or '-')")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_free)

    s = sub.add_parser("agraph", parents=[common], help="redraw an A-graph with new crossings")
    s.add_argument("doc")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--seed", type=int, default=0, help="seed for random coefficient retries")
    s.set_defaults(func=cmd_agraph)

    s = sub.add_parser("morph", parents=[common], help="frames along the continuation path")
    s.add_argument("doc")
    s.add_argument("--frames", type=int, default=10)
    s.add_argument("-o", "--output", required=True, help="output directory")
    s.set_defaults(func=cmd_morph)

    s = sub.add_parser("gen", parents=[common], help="generate a random instance")
    s.add_argument("--kind", choices=("agraph", "tri"), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--size", type=int, default=20)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("render", parents=[common], help="SVG picture of a document")
    s.add_argument("doc")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--width", type=int, default=640)
    s.add_argument("--labels", action="store_true")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FreeSetError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return EXIT.get(exc.category, 3)
    except ValueError as exc:
        err = SchemaError(str(exc))
        sys.stderr.write(json.dumps(err.to_json(), sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
