"""Straight-line drawings, crossing sequences against the axis x = 0, and oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .embedding import CombinatorialEmbedding, Edge, Vertex, ekey
from .errors import DegenerateCrossing, GraphMismatch
from .exact import Number, ccw_sort, dot_sign, line_intercept, orient, segments_intersect, signed_area2, to_fraction


class Side(IntEnum):
    L = -1
    Y = 0
    R = 1


def side_of(x: Number) -> Side:
    """Classify an x-coordinate; membership in the axis is an exact zero test."""
    return Side.R if x > 0 else Side.L if x < 0 else Side.Y


@dataclass(frozen=True)
class VertexItem:
    v: Vertex

    def to_json(self) -> dict:
        return {"kind": "vertex", "id": self.v}


@dataclass(frozen=True)
class EdgeItem:
    e: Edge

    def to_json(self) -> dict:
        return {"kind": "edge", "u": self.e[0], "v": self.e[1]}


Item = Union[VertexItem, EdgeItem]


@dataclass(frozen=True)
class CrossingSequence:
    """Ordered vertices and open edges met by the axis, with targets and tolerance."""

    items: Tuple[Item, ...]
    targets: Tuple[Number, ...]
    eps: Number = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "targets", tuple(self.targets))
        if len(self.items) != len(self.targets):
            raise ValueError("items and targets differ in length")

    def __len__(self) -> int:
        return len(self.items)

    def strictly_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.targets, self.targets[1:]))

    def min_gap(self) -> Optional[Number]:
        if len(self.targets) < 2:
            return None
        return min(b - a for a, b in zip(self.targets, self.targets[1:]))


@dataclass(frozen=True, eq=False)
class StraightLineDrawing:
    embedding: CombinatorialEmbedding
    coords: Mapping[Vertex, Tuple[Number, Number]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", {v: tuple(self.coords[v]) for v in self.embedding.rot})

    @staticmethod
    def from_edges(coords: Mapping[Vertex, Tuple[Number, Number]], edges) -> "StraightLineDrawing":
        return StraightLineDrawing(CombinatorialEmbedding.from_coordinates(coords, edges), coords)

    def side(self, v: Vertex) -> Side:
        return side_of(self.coords[v][0])

    def sides(self) -> Dict[Vertex, Side]:
        return {v: self.side(v) for v in self.embedding.rot}

    def with_coords(self, coords) -> "StraightLineDrawing":
        return StraightLineDrawing(self.embedding, coords)

    def bbox_scale(self) -> float:
        if not self.coords:
            return 1.0
        xs = [float(c[0]) for c in self.coords.values()]
        ys = [float(c[1]) for c in self.coords.values()]
        return max(max(xs) - min(xs), max(ys) - min(ys), 1e-300)


# --------------------------------------------------------------------------
# crossing sequence


def edge_intercepts(d: StraightLineDrawing) -> Dict[Edge, Fraction]:
    """Exact axis intercept of every edge that meets the axis in a single point."""
    out: Dict[Edge, Fraction] = {}
    for u, v in d.embedding.edges():
        pu, pv = d.coords[u], d.coords[v]
        su, sv = side_of(pu[0]), side_of(pv[0])
        if su == Side.Y and sv == Side.Y:
            continue
        if su == Side.Y:
            out[(u, v)] = to_fraction(pu[1])
        elif sv == Side.Y:
            out[(u, v)] = to_fraction(pv[1])
        elif su != sv:
            out[(u, v)] = line_intercept(pu, pv)
    return out


def crossing_sequence_of(d: StraightLineDrawing, eps: Number = 0.0, exact: bool = False) -> CrossingSequence:
    """Vertices on the axis and edges crossing it, sorted bottom to top.

    Edges touching the axis only at an endpoint belong to that vertex's group
    and are not items; edges lying on the axis are omitted.  Targets are the
    observed coordinates (``Fraction`` when ``exact``).
    """
    entries: List[Tuple[Fraction, int, Item]] = []
    for v in d.embedding.vertices:
        x, y = d.coords[v]
        if x == 0:
            entries.append((to_fraction(y), 0, VertexItem(v)))
    for u, v in d.embedding.edges():
        pu, pv = d.coords[u], d.coords[v]
        su, sv = side_of(pu[0]), side_of(pv[0])
        if su * sv == -1:
            entries.append((line_intercept(pu, pv), 1, EdgeItem((u, v))))
    entries.sort(key=lambda t: (t[0], t[1]))
    for a, b in zip(entries, entries[1:]):
        if a[0] == b[0]:
            raise DegenerateCrossing(
                "two axis elements meet at the same point", y=str(a[0]),
                items=[repr(a[2]), repr(b[2])])
    targets = tuple(t[0] if exact else float(t[0]) for t in entries)
    return CrossingSequence(tuple(t[2] for t in entries), targets, eps)


# --------------------------------------------------------------------------
# plane-ness oracle


@dataclass
class CrossingReport:
    count: int
    pairs: List[Tuple[object, object]] = field(default_factory=list)

    @property
    def plane(self) -> bool:
        return self.count == 0


def _conflict(d: StraightLineDrawing, e: Edge, f: Edge) -> bool:
    shared = set(e) & set(f)
    if len(shared) == 2:
        return False
    if shared:
        (p,) = shared
        a = e[0] if e[1] == p else e[1]
        b = f[0] if f[1] == p else f[1]
        cp, ca, cb = d.coords[p], d.coords[a], d.coords[b]
        return orient(cp, ca, cb) == 0 and dot_sign(cp, ca, cb) > 0
    return segments_intersect(d.coords[e[0]], d.coords[e[1]], d.coords[f[0]], d.coords[f[1]])


def _fbox(d: StraightLineDrawing, e: Edge):
    (x0, y0), (x1, y1) = d.coords[e[0]], d.coords[e[1]]
    fx0, fx1, fy0, fy1 = float(x0), float(x1), float(y0), float(y1)
    pad = 1e-12 * (abs(fx0) + abs(fx1) + abs(fy0) + abs(fy1)) + 1e-300
    return min(fx0, fx1) - pad, max(fx0, fx1) + pad, min(fy0, fy1) - pad, max(fy0, fy1) + pad


def is_plane(d: StraightLineDrawing) -> CrossingReport:
    """Exhaustive intersection test with exact predicates behind a box prefilter."""
    edges = d.embedding.edges()
    boxes = [_fbox(d, e) for e in edges]
    order = sorted(range(len(edges)), key=lambda i: boxes[i][0])
    pairs = []
    active: List[int] = []
    for i in order:
        xmin = boxes[i][0]
        active = [j for j in active if boxes[j][1] >= xmin]
        for j in active:
            bi, bj = boxes[i], boxes[j]
            if bi[2] > bj[3] or bj[2] > bi[3]:
                continue
            if _conflict(d, edges[i], edges[j]):
                pairs.append(tuple(sorted((edges[i], edges[j]))))
        active.append(i)
    # coincident vertices and isolated vertices on edges
    seen: Dict[Tuple, Vertex] = {}
    for v in d.embedding.vertices:
        c = d.coords[v]
        key = (c[0], c[1])
        if key in seen:
            pairs.append(tuple(sorted((("vertex", seen[key]), ("vertex", v)), key=repr)))
        else:
            seen[key] = v
    for v in d.embedding.vertices:
        if d.embedding.degree(v):
            continue
        for e in edges:
            if segments_intersect(d.coords[v], d.coords[v], d.coords[e[0]], d.coords[e[1]]):
                pairs.append((("vertex", v), e))
    pairs.sort(key=repr)
    return CrossingReport(len(pairs), pairs)


def drawn_rotation(d: StraightLineDrawing, v: Vertex) -> List[Vertex]:
    c = d.coords[v]
    return ccw_sort(c, [(w, d.coords[w]) for w in d.embedding.rot[v]])


def _cyclic_equal(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        s = list(b).index(a[0])
    except ValueError:
        return False
    k = len(a)
    return all(a[i] == b[(s + i) % k] for i in range(k))


def check_devillers(d: StraightLineDrawing, ref: CombinatorialEmbedding) -> bool:
    """Same rotation at every vertex and every face cycle drawn without self-intersection."""
    if set(d.embedding.rot) != set(ref.rot) or set(d.embedding.edges()) != set(ref.edges()):
        raise GraphMismatch("drawing and reference embedding have different graphs")
    for v in ref.rot:
        if ref.degree(v) >= 3 and not _cyclic_equal(drawn_rotation(d, v), ref.rot[v]):
            return False
    for face in ref.faces():
        if not _face_simple(d, face):
            return False
    if ref.outer is not None and ref.components() == 1:
        outer = ref.outer_face()
        for face in ref.faces():
            if len(set(face)) < 3:
                continue
            area = signed_area2([d.coords[w] for w in face])
            is_out = len(face) == len(outer) and _cyclic_equal(face, outer)
            if (area > 0) == is_out and len(set(face)) == len(face):
                return False
    return True


def _face_simple(d: StraightLineDrawing, face: Sequence[Vertex]) -> bool:
    k = len(face)
    es = []
    seen = set()
    for i in range(k):
        e = ekey(face[i], face[(i + 1) % k])
        if e in seen:
            continue
        seen.add(e)
        es.append(e)
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            if _conflict(d, es[i], es[j]):
                return False
    return True
