"""GraphDocument: the JSON exchange format.

Numbers are written as strings so that rationals survive a round trip:
floats use their shortest repr, other rationals an exact decimal when one
exists and ``p/q`` otherwise.  Plain JSON numbers are accepted on input and
converted exactly.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .drawing import CrossingSequence, EdgeItem, Item, StraightLineDrawing, VertexItem
from .embedding import CombinatorialEmbedding, Vertex, ekey
from .errors import IOFailure, MalformedEmbedding, SchemaError
from .exact import convert

FORMAT_VERSION = 1
_ALLOWED = {"format_version", "vertices", "edges", "rotation", "outer_face", "collinear_set", "targets",
            "epsilon", "options", "name", "notes", "points", "meta"}


def format_number(x: Union[int, float, Fraction]) -> str:
    if isinstance(x, float):
        return repr(x)
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    ff = float(f)
    if Fraction(ff) == f:
        return repr(ff)
    d = f.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        return format(Decimal(f.numerator) / Decimal(f.denominator), "f")
    return f"{f.numerator}/{f.denominator}"


def parse_number(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise SchemaError("boolean where a number was expected")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError("not a number", value=s) from None
    raise SchemaError("not a number", value=repr(s))


@dataclass
class GraphDocument:
    vertices: Dict[Vertex, Optional[Tuple[Fraction, Fraction]]]
    edges: List[Tuple[str, Vertex, Vertex]]
    rotation: Optional[Dict[Vertex, List[str]]] = None
    outer_face: Optional[List[str]] = None
    collinear_set: List[Vertex] = field(default_factory=list)
    targets: List[Tuple[Item, Fraction]] = field(default_factory=list)
    epsilon: Optional[Fraction] = None
    options: Dict[str, Any] = field(default_factory=lambda: {"arithmetic": "float", "tolerances": {}})
    extra: Dict[str, Any] = field(default_factory=dict)

    # ------------------------------------------------------------ accessors
    @property
    def rational(self) -> bool:
        return self.options.get("arithmetic", "float") == "rational"

    def edge_ids(self) -> Dict[Tuple, str]:
        return {ekey(u, v): i for i, u, v in self.edges}

    def embedding(self) -> CombinatorialEmbedding:
        byid = {i: (u, v) for i, u, v in self.edges}
        if self.rotation is not None:
            rot = {}
            for v, eids in self.rotation.items():
                ns = []
                for e in eids:
                    if e not in byid:
                        raise SchemaError("rotation names an unknown edge", edge=e)
                    a, b = byid[e]
                    if v not in (a, b):
                        raise SchemaError("rotation lists an edge not incident to the vertex", vertex=v, edge=e)
                    ns.append(b if a == v else a)
                rot[v] = ns
            for v in self.vertices:
                rot.setdefault(v, [])
            emb = CombinatorialEmbedding(rot)
        elif all(p is not None for p in self.vertices.values()):
            coords = self.coords(rational=True)
            emb = CombinatorialEmbedding.from_coordinates(coords, [(u, v) for _, u, v in self.edges])
        else:
            raise SchemaError("either a rotation system or coordinates are required")
        if self.outer_face:
            emb = emb.with_outer(_outer_half_edge(emb, [byid.get(e) for e in self.outer_face]))
        elif self.rotation is not None and all(p is not None for p in self.vertices.values()):
            ref = CombinatorialEmbedding.from_coordinates(self.coords(True), [(u, v) for _, u, v in self.edges])
            emb = emb.with_outer(ref.outer)
        if all(p is not None for p in self.vertices.values()) and self.rotation is not None:
            ref = CombinatorialEmbedding.from_coordinates(self.coords(True), [(u, v) for _, u, v in self.edges])
            for v in emb.vertices:
                if not _cyclic_equal(ref.rot[v], emb.rot[v]):
                    raise SchemaError("rotation disagrees with the coordinates", vertex=v)
        return emb

    def coords(self, rational: Optional[bool] = None) -> Dict[Vertex, Tuple]:
        r = self.rational if rational is None else rational
        out = {}
        for v, p in self.vertices.items():
            if p is None:
                raise SchemaError("vertex without coordinates", vertex=v)
            out[v] = (convert(p[0], r), convert(p[1], r))
        return out

    def drawing(self, rational: Optional[bool] = None) -> StraightLineDrawing:
        return StraightLineDrawing(self.embedding(), self.coords(rational))

    def crossing_sequence(self, rational: Optional[bool] = None) -> Optional[CrossingSequence]:
        if not self.targets:
            return None
        r = self.rational if rational is None else rational
        eps = convert(self.epsilon if self.epsilon is not None else 0, r)
        return CrossingSequence(tuple(i for i, _ in self.targets),
                                tuple(convert(y, r) for _, y in self.targets), eps)

    # --------------------------------------------------------- constructors
    @staticmethod
    def from_drawing(d: StraightLineDrawing, collinear_set: Sequence[Vertex] = (),
                     seq: Optional[CrossingSequence] = None, rotation: bool = True,
                     options: Optional[dict] = None, **extra) -> "GraphDocument":
        emb = d.embedding
        edges = [(f"e{i}", u, v) for i, (u, v) in enumerate(emb.edges())]
        ids = {ekey(u, v): i for i, u, v in edges}
        rot = {v: [ids[ekey(v, w)] for w in emb.rot[v]] for v in emb.vertices} if rotation else None
        outer = None
        if emb.outer is not None and emb.m() > 0:
            f = emb.outer_face()
            outer = [ids[ekey(f[i], f[(i + 1) % len(f)])] for i in range(len(f))]
        doc = GraphDocument(
            {v: (Fraction(d.coords[v][0]), Fraction(d.coords[v][1])) for v in emb.vertices},
            edges, rot, outer, list(collinear_set), [], None,
            dict(options or {"arithmetic": "float", "tolerances": {}}), dict(extra))
        if seq is not None:
            doc.targets = [(it, Fraction(t)) for it, t in zip(seq.items, seq.targets)]
            doc.epsilon = Fraction(seq.eps) if seq.eps else None
        return doc

    # ------------------------------------------------------------ json
    def to_json(self) -> dict:
        ids = self.edge_ids()
        out: Dict[str, Any] = {"format_version": FORMAT_VERSION}
        for k in ("name", "notes"):
            if k in self.extra:
                out[k] = self.extra[k]
        out["vertices"] = [
            {"id": v} if p is None else {"id": v, "x": format_number(p[0]), "y": format_number(p[1])}
            for v, p in self.vertices.items()]
        out["edges"] = [{"id": i, "u": u, "v": v} for i, u, v in self.edges]
        if self.rotation is not None:
            out["rotation"] = [{"vertex": v, "ccw": list(es)} for v, es in self.rotation.items()]
        if self.outer_face is not None:
            out["outer_face"] = list(self.outer_face)
        out["collinear_set"] = list(self.collinear_set)
        tg = []
        for it, y in self.targets:
            item = {"vertex": it.v} if isinstance(it, VertexItem) else {"edge": ids[ekey(*it.e)]}
            tg.append({"item": item, "y": format_number(y)})
        out["targets"] = tg
        out["epsilon"] = None if self.epsilon is None else format_number(self.epsilon)
        opts = dict(self.options)
        opts.setdefault("arithmetic", "float")
        opts.setdefault("tolerances", {})
        out["options"] = opts
        if "points" in self.extra:
            out["points"] = [[format_number(x), format_number(y)] for x, y in self.extra["points"]]
        if "meta" in self.extra:
            out["meta"] = self.extra["meta"]
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())

    @staticmethod
    def from_json(obj: Any) -> "GraphDocument":
        return parse_document(obj)


def dumps(obj: Any) -> str:
    """Canonical JSON text (sorted keys are not used: field order is fixed)."""
    return json.dumps(obj, indent=1, ensure_ascii=True) + "\n"


def _vid(x: Any) -> Vertex:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError("vertex ids must be integers or strings", value=repr(x))
    return x


def parse_document(obj: Any) -> GraphDocument:
    """Validate and parse a GraphDocument (dict or JSON text)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SchemaError("invalid JSON", reason=str(exc)) from None
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object")
    unknown = set(obj) - _ALLOWED
    if unknown:
        raise SchemaError("unknown fields", fields=sorted(unknown))
    fv = obj.get("format_version", FORMAT_VERSION)
    if fv != FORMAT_VERSION:
        raise SchemaError("unsupported format version", version=fv)
    if not isinstance(obj.get("vertices"), list) or not isinstance(obj.get("edges", []), list):
        raise SchemaError("vertices and edges must be lists")
    verts: Dict[Vertex, Optional[Tuple[Fraction, Fraction]]] = {}
    for e in obj["vertices"]:
        if not isinstance(e, dict) or "id" not in e:
            raise SchemaError("vertex entry needs an id")
        v = _vid(e["id"])
        if v in verts:
            raise SchemaError("duplicate vertex id", vertex=v)
        if ("x" in e) != ("y" in e):
            raise SchemaError("vertex needs both coordinates or neither", vertex=v)
        verts[v] = (parse_number(e["x"]), parse_number(e["y"])) if "x" in e else None
    kinds = {type(v) for v in verts}
    if len(kinds) > 1:
        raise SchemaError("vertex ids must all be integers or all strings")
    edges: List[Tuple[str, Vertex, Vertex]] = []
    eids = set()
    pairs = set()
    for k, e in enumerate(obj.get("edges", [])):
        if not isinstance(e, dict) or "u" not in e or "v" not in e:
            raise SchemaError("edge entry needs u and v")
        i = str(e.get("id", f"e{k}"))
        u, v = _vid(e["u"]), _vid(e["v"])
        if i in eids:
            raise SchemaError("duplicate edge id", edge=i)
        if u not in verts or v not in verts:
            raise SchemaError("edge endpoint is not a vertex", edge=i)
        if u == v:
            raise SchemaError("loop edge", edge=i)
        if ekey(u, v) in pairs:
            raise SchemaError("parallel edge", edge=i)
        eids.add(i)
        pairs.add(ekey(u, v))
        edges.append((i, u, v))
    rotation = None
    if obj.get("rotation") is not None:
        rotation = {}
        for r in obj["rotation"]:
            if not isinstance(r, dict) or "vertex" not in r or not isinstance(r.get("ccw"), list):
                raise SchemaError("rotation entry needs vertex and ccw list")
            v = _vid(r["vertex"])
            if v not in verts:
                raise SchemaError("rotation for unknown vertex", vertex=v)
            rotation[v] = [str(x) for x in r["ccw"]]
        inc: Dict[Vertex, set] = {v: set() for v in verts}
        for i, u, v in edges:
            inc[u].add(i)
            inc[v].add(i)
        for v in verts:
            if set(rotation.get(v, [])) != inc[v] or len(rotation.get(v, [])) != len(inc[v]):
                raise SchemaError("rotation does not list exactly the incident edges", vertex=v)
    outer = obj.get("outer_face")
    if outer is not None:
        if not isinstance(outer, list) or any(str(x) not in eids for x in outer):
            raise SchemaError("outer face must be a list of edge ids")
        outer = [str(x) for x in outer]
    S = [_vid(v) for v in obj.get("collinear_set", []) or []]
    for v in S:
        if v not in verts:
            raise SchemaError("collinear vertex is not a vertex", vertex=v)
    byid = {i: (u, v) for i, u, v in edges}
    targets: List[Tuple[Item, Fraction]] = []
    for t in obj.get("targets", []) or []:
        if not isinstance(t, dict) or "item" not in t or "y" not in t:
            raise SchemaError("target entry needs item and y")
        it = t["item"]
        if isinstance(it, dict) and "vertex" in it:
            v = _vid(it["vertex"])
            if v not in verts:
                raise SchemaError("target names an unknown vertex", vertex=v)
            item: Item = VertexItem(v)
        elif isinstance(it, dict) and "edge" in it:
            e = str(it["edge"])
            if e not in byid:
                raise SchemaError("target names an unknown edge", edge=e)
            item = EdgeItem(ekey(*byid[e]))
        else:
            raise SchemaError("target item must name a vertex or an edge")
        targets.append((item, parse_number(t["y"])))
    eps = obj.get("epsilon")
    eps = None if eps is None else parse_number(eps)
    opts = obj.get("options") or {}
    if not isinstance(opts, dict):
        raise SchemaError("options must be an object")
    arith = opts.get("arithmetic", "float")
    if arith not in ("float", "rational"):
        raise SchemaError("arithmetic must be float or rational", value=arith)
    tols = opts.get("tolerances", {}) or {}
    if not isinstance(tols, dict) or any(not isinstance(v, (int, float)) or isinstance(v, bool)
                                         for v in tols.values()):
        raise SchemaError("tolerances must map names to numbers")
    options = {"arithmetic": arith, "tolerances": dict(tols)}
    for k, v in opts.items():
        if k not in options:
            options[k] = v
    extra: Dict[str, Any] = {}
    for k in ("name", "notes", "meta"):
        if k in obj:
            extra[k] = obj[k]
    if obj.get("points") is not None:
        pts = obj["points"]
        if not isinstance(pts, list) or any(not isinstance(p, list) or len(p) != 2 for p in pts):
            raise SchemaError("points must be a list of [x, y] pairs")
        extra["points"] = [(parse_number(p[0]), parse_number(p[1])) for p in pts]
    return GraphDocument(verts, edges, rotation, outer, S, targets, eps, options, extra)


def _cyclic_equal(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    a, b = list(a), list(b)
    if b[0] not in a:
        return False
    i = a.index(b[0])
    return a[i:] + a[:i] == b


def _outer_half_edge(emb: CombinatorialEmbedding, cycle_edges: List[Optional[Tuple]]):
    if any(e is None for e in cycle_edges):
        raise SchemaError("outer face names an unknown edge")
    k = len(cycle_edges)
    if k == 0:
        return None
    # orient the first edge so that the next one continues from its head
    u, v = cycle_edges[0]
    if k > 1 and v not in cycle_edges[1]:
        u, v = v, u
    walk = [u, v]
    for e in cycle_edges[1:]:
        a, b = e
        if walk[-1] == a:
            walk.append(b)
        elif walk[-1] == b:
            walk.append(a)
        else:
            raise SchemaError("outer face edges do not form a closed walk")
    if walk[-1] != walk[0]:
        raise SchemaError("outer face edges do not form a closed walk")
    for h in ((u, v), (v, u)):
        f = emb.face_of(h)
        if len(f) == k and set(f) == set(walk[:-1]):
            return h
    raise MalformedEmbedding("outer face is not a face of the embedding")


def read_document(path: Union[str, Path]) -> GraphDocument:
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    except OSError as exc:
        raise IOFailure("cannot read input", path=str(path), reason=str(exc)) from None
    return parse_document(text)


def write_text(path: Optional[Union[str, Path]], text: str) -> None:
    try:
        if path is None or str(path) == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            Path(path).write_text(text)
    except OSError as exc:
        raise IOFailure("cannot write output", path=str(path), reason=str(exc)) from None
