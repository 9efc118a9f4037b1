"""Fixtures, random instance generators and output verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import floor, log2
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import triangle

from .agraph import AGraph, validate_a_graph
from .drawing import (
    CrossingSequence,
    EdgeItem,
    Side,
    StraightLineDrawing,
    VertexItem,
    check_devillers,
    crossing_sequence_of,
    is_plane,
    side_of,
)
from .embedding import CombinatorialEmbedding, Edge, Vertex, ekey
from .errors import DegenerateCrossing, FreeSetError, RetryExhausted, UnknownFixture
from .exact import Number, convert, line_intercept, orient, segments_intersect, to_fraction
from .io import GraphDocument, parse_document
from .pipeline import FreeSetRequest
from .reducer import ReductionInstance

FIXTURE_NAMES = ("H5", "CUBE", "CUBE-T", "OCTA-C", "SPLIT-1", "FLIP-1", "ONC-1", "HEX-1", "CONTRACT-1")


# ---------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    drawing: StraightLineDrawing
    seq: Optional[CrossingSequence]
    S: Tuple[Vertex, ...]
    notes: str
    kind: str                       # agraph | triangulation | witness

    @property
    def embedding(self) -> CombinatorialEmbedding:
        return self.drawing.embedding

    @property
    def coordinates(self):
        return self.drawing.coords

    def agraph(self) -> AGraph:
        return validate_a_graph(self.drawing)

    def instance(self, rational: bool = False) -> ReductionInstance:
        d = self.drawing
        seq = self.seq if self.seq is not None else crossing_sequence_of(d, exact=True)
        delta = {v: d.coords[v] for v in d.embedding.outer_vertices()}
        return ReductionInstance.create(d.embedding, seq, delta, d.sides(), rational)

    def request(self, targets: Sequence) -> FreeSetRequest:
        return FreeSetRequest(self.drawing, self.S, tuple(targets))

    def document(self) -> GraphDocument:
        return GraphDocument.from_drawing(self.drawing, self.S, self.seq, name=self.name, notes=self.notes,
                                          meta={"kind": self.kind})


def fixture(name: str) -> Fixture:
    """Load a shipped fixture by name."""
    if name not in FIXTURE_NAMES:
        raise UnknownFixture("no such fixture", name=name, known=list(FIXTURE_NAMES))
    text = resources.files("freeset").joinpath("data", f"{name}.json").read_text()
    return fixture_from_document(parse_document(text))


def fixture_from_document(doc: GraphDocument) -> Fixture:
    d = doc.drawing(rational=True)
    seq = doc.crossing_sequence(rational=True)
    return Fixture(doc.extra.get("name", ""), d, seq, tuple(doc.collinear_set), doc.extra.get("notes", ""),
                   (doc.extra.get("meta") or {}).get("kind", "witness"))


def _mk(name, coords, edges, kind, notes, S=(), targets=None, eps=None) -> Fixture:
    d = StraightLineDrawing.from_edges(coords, edges)
    seq = None
    if kind != "witness" or targets is not None:
        obs = crossing_sequence_of(d, exact=True)
        tg = obs.targets if targets is None else tuple(Fraction(t) for t in targets)
        if eps is None and len(tg) > 1:
            eps = min(b - a for a, b in zip(tg, tg[1:])) / 3
        seq = CrossingSequence(obs.items, tg, Fraction(eps) if eps is not None else 0)
    return Fixture(name, d, seq, tuple(S), notes, kind)


def _edges(spec: str) -> List[Edge]:
    return [tuple(p.split("-")) for p in spec.split()]


def build_fixture(name: str) -> Fixture:
    """Construct a fixture from its definition (used to produce the JSON files)."""
    if name == "H5":
        c = {"v": (0, 0), "u": (0, 2), "p": (-2, 3), "q": (1, 1), "r": (4, 3)}
        return _mk(name, c, _edges("v-p v-q p-q u-p u-q u-r p-r v-r"), "agraph",
                   "A-graph with axis vertices v and u, outer triangle v p r", S=("v", "u"))
    if name == "CUBE":
        return _mk(name, *_cube(), "agraph", "3-cube, bipartition classes on opposite sides, no axis vertex")
    if name == "CUBE-T":
        coords, edges = _cube()
        d = StraightLineDrawing.from_edges(coords, edges)
        extra = []
        emb = d.embedding
        outer = emb.outer_face()
        for f in emb.faces():
            if set(f) == set(outer):
                continue
            extra.append(ekey(*_reflex_diagonal(f, coords)))
        k = [i for i in range(4) if orient(coords[outer[i - 1]], coords[outer[i]], coords[outer[(i + 1) % 4]]) > 0]
        x = outer[k[0]]
        extra.append(ekey(outer[k[0] - 1], outer[(k[0] + 1) % 4]))
        return _mk(name, coords, list(edges) + extra, "triangulation",
                   f"cube with one diagonal per inner quad and the outer edge around reflex corner {x}")
    if name == "OCTA-C":
        c = {"A": (-4, 2.5), "B": (4, -0.5), "C": (4, 5.5), "D": (1, 1.875), "E": (1, 3.125), "F": (2.5, 2.5)}
        return _mk(name, c, _edges("A-B B-C A-C D-E E-F D-F A-D A-E B-D B-F C-E C-F"), "triangulation",
                   "octahedron with only A left of the axis; crossings at 1, 2, 3, 4", targets=(1, 2, 3, 4),
                   eps=Fraction(3, 10))
    if name == "SPLIT-1":
        c = {"P": (-8, -4), "Q": (8, -4), "T": (0, 8), "x": (0, -2), "y": (-3, 2.5), "z": (3, 2.5), "w": (1, 1)}
        e = _edges("P-Q Q-T P-T x-y y-z x-z w-x w-y w-z P-x Q-x P-y Q-z T-y T-z")
        return _mk(name, c, e, "triangulation", "separating triangle x y z entered at x, left through yz",
                   S=("x", "T"), eps=Fraction(1, 4))
    if name == "FLIP-1":
        c = {0: (1, 1.5), 1: (1, 2.5), 2: (4, 2), 3: (-2, 0), 4: (-1.5, 2), 5: (-2, 4)}
        e = [(2, 3), (2, 5), (3, 5), (0, 3), (0, 4), (1, 4), (1, 5), (0, 1), (0, 2), (1, 2), (3, 4), (4, 5)]
        return _mk(name, c, e, "triangulation",
                   "x=0 y=1 z=2 a=3 b=4 c=5; xy flips to zb, crossings za xa xb yb yc zc", eps=Fraction(1, 10))
    if name == "ONC-1":
        c = {"A": (-6, -6), "B": (-6, 6), "C": (6, 0), "D": (0, 1.5), "E": (0, -1.5), "F": (2, 0.5)}
        e = _edges("A-B B-C A-C A-D A-E B-D B-F C-E C-F D-E D-F E-F")
        return _mk(name, c, e, "triangulation",
                   "octahedron with edge D E on the axis and nothing to split, contract or flip",
                   S=("E", "D"), eps=Fraction(1, 10))
    if name == "HEX-1":
        c = {"s": (0, -1), "a": (1, -0.5), "b": (1, 0.5), "t": (0, 1), "c": (-1, 0.5), "d": (-1, -0.5)}
        return _mk(name, c, _edges("s-a a-b b-t t-c c-d d-s"), "witness", "hexagon with two axis corners",
                   S=("s", "t"))
    if name == "CONTRACT-1":
        c = {"P": (-8, -4), "Q": (8, -4), "T": (0, 8), "m": (0, 1), "r1": (3, 0), "r2": (3.5, 2.5)}
        e = _edges("P-Q P-T Q-T P-m Q-m T-m m-r1 m-r2 Q-r1 r1-r2 Q-r2 T-r2")
        return _mk(name, c, e, "triangulation", "edge r1 r2 is far from the axis and contractible",
                   S=("m", "T"), eps=Fraction(1, 2))
    raise UnknownFixture("no such fixture", name=name)


def _reflex_diagonal(f, coords) -> Edge:
    for i in range(4):
        if orient(coords[f[i - 1]], coords[f[i]], coords[f[(i + 1) % 4]]) < 0:
            return (f[i], f[(i + 2) % 4])
    raise ValueError("convex face")


def _cube():
    """3-cube with classes {1, 3, 6, 8} left and {2, 4, 5, 7} right of the axis.

    Coordinates were found once by a local search over dyadic points and are
    frozen here; every face, the outer one included, is a non-convex quad.
    """
    c = {1: (-8.1875, -6.953125), 2: (1.71875, 7.171875), 3: (-4.125, -2.234375), 4: (0.0625, -3.625),
         5: (7.15625, -3.1875), 6: (-1.921875, 1.125), 7: (0.328125, -0.453125), 8: (-1.15625, -1.234375)}
    e = [(1, 2), (2, 3), (3, 4), (1, 4), (5, 6), (6, 7), (7, 8), (5, 8), (1, 5), (2, 6), (3, 7), (4, 8)]
    return ({f"c{v}": p for v, p in c.items()}, [(f"c{u}", f"c{v}") for u, v in e])


# ---------------------------------------------------------------------------
# A-graph generator


def _inside(p, poly) -> bool:
    """Strictly inside a simple polygon (exact: ray casting decided by orientation signs)."""
    y = p[1]
    k = len(poly)
    inside = False
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        o = orient(a, b, p)
        if o == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            return False
        if (a[1] > y) != (b[1] > y):
            # the rightward ray meets ab exactly when p lies left of ab taken upwards
            if (o > 0) == (b[1] > a[1]):
                inside = not inside
    return inside


def _nonconvex(pts) -> bool:
    s = [orient(pts[i - 1], pts[i], pts[(i + 1) % 4]) for i in range(4)]
    return 0 not in s and len(set(s)) == 2


def _float_intercept(p, q) -> float:
    return (p[1] * q[0] - q[1] * p[0]) / (q[0] - p[0])


class _Grower:
    """Witness-first A-graph growth by two local operations inside quad faces."""

    def __init__(self, coords, edges):
        self.coords: Dict[int, Tuple[float, float]] = dict(coords)
        self.edges: List[Edge] = [ekey(*e) for e in edges]
        self.heights = set()
        self.quads: Optional[List[Tuple[int, ...]]] = None
        for u, v in self.edges:
            self.heights.add(self._h(u, v))

    def _h(self, u, v):
        pu, pv = self.coords[u], self.coords[v]
        if pu[0] == 0:
            return to_fraction(pu[1])
        if pv[0] == 0:
            return to_fraction(pv[1])
        return line_intercept(pu, pv)

    @staticmethod
    def seed(kind: str) -> "_Grower":
        if kind == "triangle":
            return _Grower({0: (-1.0, 0.0), 1: (1.0, 0.5), 2: (0.0, 2.0)}, [(0, 1), (1, 2), (0, 2)])
        if kind == "quad":
            return _Grower({0: (-1.0, 0.0), 1: (1.0, 1.0), 2: (-1.0, 2.0), 3: (3.0, 1.0)},
                           [(0, 1), (1, 2), (2, 3), (0, 3)])
        if kind == "h5":
            c = {0: (0.0, 0.0), 1: (0.0, 2.0), 2: (-2.0, 3.0), 3: (1.0, 1.0), 4: (4.0, 3.0)}
            return _Grower(c, [(0, 2), (0, 3), (2, 3), (1, 2), (1, 3), (1, 4), (2, 4), (0, 4)])
        raise ValueError(kind)

    @property
    def m(self) -> int:
        return len(self.edges)

    def drawing(self) -> StraightLineDrawing:
        return StraightLineDrawing.from_edges(self.coords, self.edges)

    def _inner_quads(self) -> List[Tuple[int, ...]]:
        # computed once, then maintained by the two operations
        if self.quads is None:
            emb = CombinatorialEmbedding.from_coordinates(self.coords, self.edges)
            self.quads = [f for f in emb.faces() if len(f) == 4 and not emb.is_outer(f)]
        return self.quads

    @staticmethod
    def _reflex(poly) -> int:
        for i in range(4):
            if orient(poly[i - 1], poly[i], poly[(i + 1) % 4]) < 0:
                return i
        return -1

    @staticmethod
    def _snap(v: float, g: float) -> float:
        return float(round(v / g) * g)

    def _segment_ok(self, p, corner, poly) -> bool:
        k = len(poly)
        for i in range(k):
            a, b = poly[i], poly[(i + 1) % k]
            if corner in (a, b):
                if orient(a, b, p) == 0:
                    return False
                continue
            if segments_intersect(p, corner, a, b):
                return False
        return True

    def _add(self, p, nbrs, heights) -> int:
        nid = max(self.coords) + 1
        self.coords[nid] = p
        self.edges += [ekey(nid, w) for w in nbrs]
        self.heights |= set(heights)
        return nid

    def op1(self, rng, tries: int = 16) -> bool:
        """Split a quad by a new vertex on its inner diagonal, joined to the
        two vertices off that diagonal (two quads replace one)."""
        quads = self._inner_quads()
        if not quads:
            return False
        for _ in range(tries):
            f = quads[int(rng.integers(len(quads)))]
            poly = [self.coords[v] for v in f]
            k = self._reflex(poly)
            if k < 0:
                continue
            r, a, o, c = (f[(k + i) % 4] for i in range(4))
            pr, po = self.coords[r], self.coords[o]
            sides = {side_of(pr[0]), side_of(po[0])} - {Side.Y}
            if len(sides) != 1:
                continue
            side = sides.pop()
            t = float(rng.uniform(0.15, 0.85))
            g = 2.0 ** floor(log2(max(abs(po[0] - pr[0]), abs(po[1] - pr[1])) / 1024))
            w = (self._snap(pr[0] + t * (po[0] - pr[0]), g), self._snap(pr[1] + t * (po[1] - pr[1]), g))
            if side_of(w[0]) != side or not _inside(w, poly):
                continue
            pa, pc = self.coords[a], self.coords[c]
            if not (self._segment_ok(w, pa, poly) and self._segment_ok(w, pc, poly)):
                continue
            if not (_nonconvex([pa, pr, pc, w]) and _nonconvex([pc, po, pa, w])):
                continue
            fresh = [line_intercept(w, q) for q in (pa, pc) if side_of(q[0]) != Side.Y]
            if any(h in self.heights for h in fresh) or len(set(fresh)) < len(fresh):
                continue
            nid = self._add(w, (a, c), fresh)
            quads.remove(f)
            quads += [(r, a, nid, c), (a, o, c, nid)]
            return True
        return False

    def op2(self, rng, tries: int = 16) -> bool:
        """Put a new axis vertex inside a quad, joined to three of its corners
        (two triangles and a smaller quad replace one quad)."""
        quads = self._inner_quads()
        if not quads:
            return False
        for _ in range(tries):
            f = quads[int(rng.integers(len(quads)))]
            poly = [self.coords[v] for v in f]
            # sampling range only, floats are enough here
            hs = [_float_intercept(poly[i], poly[(i + 1) % 4]) for i in range(4)]
            lo, hi = min(hs), max(hs)
            g = 2.0 ** floor(log2((hi - lo) / 1024))
            v = (0.0, self._snap(float(rng.uniform(lo, hi)), g))
            if not _inside(v, poly) or to_fraction(v[1]) in self.heights:
                continue
            for r in [int(x) for x in rng.permutation(4)]:
                a, b, c, d = (f[(r + i) % 4] for i in range(4))
                pa, pb, pc, pd = (self.coords[x] for x in (a, b, c, d))
                if Side.Y in (side_of(pb[0]), side_of(pc[0]), side_of(pd[0])):
                    continue
                if not all(self._segment_ok(v, q, poly) for q in (pb, pc, pd)):
                    continue
                if orient(v, pb, pc) == 0 or orient(v, pc, pd) == 0 or not _nonconvex([pa, pb, v, pd]):
                    continue
                nid = self._add(v, (b, c, d), (to_fraction(v[1]),))
                quads.remove(f)
                quads.append((a, b, nid, d))
                return True
        return False


def gen_a_graph(seed: int, size: int) -> AGraph:
    """Random A-graph with at most ``size`` edges (and at least ``size - 2`` when
    growth succeeds), together with its witness drawing."""
    if size < 3:
        raise ValueError("size must be at least 3")
    rng = np.random.default_rng(seed)
    if size < 4:
        kind = "triangle"
    elif size < 8:
        kind = "quad"
    else:
        kind = ("quad", "h5")[int(rng.integers(2))]
    g = _Grower.seed(kind)
    stalls = 0
    while g.m + 2 <= size and stalls < 8:
        use2 = g.m + 3 <= size and rng.random() < 0.4
        ok = g.op2(rng) if use2 else g.op1(rng)
        if not ok:
            ok = g.op1(rng) if use2 else (g.m + 3 <= size and g.op2(rng))
        stalls = 0 if ok else stalls + 1
    return validate_a_graph(g.drawing())


def random_agraph_targets(a: AGraph, rng: np.random.Generator, rational: bool = False) -> List[Number]:
    """Strictly increasing random targets (dyadic) that respect axis-vertex groups."""
    groups = []
    m = a.m
    i = 0
    owner = {}
    for v, ps in a.groups.items():
        for p in ps:
            owner[p] = v
    while i < m:
        v = owner.get(i)
        j = i
        while j + 1 < m and v is not None and owner.get(j + 1) == v:
            j += 1
        groups.append((i, j))
        i = j + 1
    steps = rng.uniform(0.05, 1.0, len(groups))
    vals: List[Number] = []
    acc = Fraction(0)
    for (i, j), s in zip(groups, steps):
        acc += Fraction(int(s * 2 ** 20), 2 ** 20)
        vals.extend([acc] * (j - i + 1))
    return [convert(v, rational) for v in vals]


# ---------------------------------------------------------------------------
# triangulation instances


@dataclass
class TriangulationSample:
    instance: ReductionInstance
    witness: StraightLineDrawing
    seed: int


_OUTER = ((-8.0, -8.0), (8.0, -6.0), (1.0, 9.0))


def _random_triangulation(rng, n: int, n0: int) -> StraightLineDrawing:
    pts = list(_OUTER)
    seen = set(pts)
    while len(pts) < n:
        x = 0.0 if len(pts) - 3 < n0 else round(float(rng.uniform(-8, 8)) * 64) / 64
        y = round(float(rng.uniform(-8, 9)) * 64) / 64
        p = (x, y)
        if (x == 0.0) != (len(pts) - 3 < n0):
            continue
        if p in seen or not all(orient(_OUTER[i], _OUTER[(i + 1) % 3], p) > 0 for i in range(3)):
            continue
        seen.add(p)
        pts.append(p)
    t = triangle.triangulate({"vertices": np.array(pts)}, "Q")
    if len(t["vertices"]) != len(pts):
        raise DegenerateCrossing("triangulation added points")
    edges = set()
    for tri in t["triangles"]:
        a, b, c = (int(i) for i in tri)
        edges |= {ekey(a, b), ekey(b, c), ekey(a, c)}
    d = StraightLineDrawing.from_edges({i: p for i, p in enumerate(pts)}, edges)
    if not d.embedding.is_triangulation() or not is_plane(d).plane:
        raise DegenerateCrossing("degenerate point set")
    return d


def gen_triangulation_instance(seed: int, n: int, rational: bool = False) -> TriangulationSample:
    """Random triangulated point set with some points on the axis.

    Outer items keep their witness heights; inner targets are redrawn
    uniformly between them, and the tolerance is a third of the smallest gap.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    rng = np.random.default_rng(seed)
    for _ in range(16):
        n0 = int(rng.integers(0, max(2, n // 5) + 1))
        n0 = min(n0, n - 3)
        try:
            d = _random_triangulation(rng, n, n0)
            obs = crossing_sequence_of(d, exact=True)
        except DegenerateCrossing:
            continue
        k = len(obs.items)
        lo, hi = obs.targets[0], obs.targets[-1]
        inner = sorted(Fraction(int(u * 2 ** 20), 2 ** 20) for u in rng.uniform(float(lo), float(hi), k - 2))
        tg = [lo] + inner + [hi]
        if any(not a < b for a, b in zip(tg, tg[1:])):
            continue
        eps = min(b - a for a, b in zip(tg, tg[1:])) / 3
        seq = CrossingSequence(obs.items, tuple(tg), eps)
        delta = {v: d.coords[v] for v in d.embedding.outer_vertices()}
        inst = ReductionInstance.create(d.embedding, seq, delta, d.sides(), rational)
        return TriangulationSample(inst, d, seed)
    raise RetryExhausted("no non-degenerate point set after 16 attempts", seed=seed, n=n)


def gen_free_set_request(seed: int, k: int, n: Optional[int] = None, keep: float = 0.7) -> FreeSetRequest:
    """Witness with ``k`` axis vertices (edges thinned at random) and random
    distinct target points."""
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(k + 6, 3 * k + 12))
    for _ in range(16):
        try:
            d = _random_triangulation(rng, n, k)
        except DegenerateCrossing:
            continue
        edges = [e for e in d.embedding.edges() if rng.random() < keep]
        w = StraightLineDrawing.from_edges(d.coords, edges)
        S = tuple(sorted((v for v in w.coords if w.coords[v][0] == 0), key=lambda v: w.coords[v][1]))
        pts = set()
        while len(pts) < k:
            pts.add(tuple(round(float(c) * 256) / 256 for c in rng.uniform(-10, 10, 2)))
        return FreeSetRequest(w, S, tuple(sorted(pts)))
    raise RetryExhausted("no witness after 16 attempts", seed=seed)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    plane: bool
    devillers: bool
    targets_exact: bool
    within_eps: bool
    order: bool
    sides: bool
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all((self.plane, self.devillers, self.targets_exact, self.within_eps, self.order, self.sides))

    def failures(self) -> List[str]:
        return [k for k in ("plane", "devillers", "targets_exact", "within_eps", "order", "sides")
                if not getattr(self, k)]

    def to_json(self) -> dict:
        return {"ok": self.ok, **{k: getattr(self, k) for k in
                                  ("plane", "devillers", "targets_exact", "within_eps", "order", "sides")}}


def verify_output(output: StraightLineDrawing, request: ReductionInstance,
                  reference: Optional[CombinatorialEmbedding] = None, vertex_tol: float = 1e-9,
                  edge_slack: float = 0.0) -> VerificationReport:
    """Check a drawing against an instance: planarity, embedding, targets,
    windows, crossing order and sides.  Exact arithmetic throughout; vertex
    targets are compared exactly for rational outputs and within
    ``vertex_tol`` (relative) otherwise."""
    ref = reference or request.T
    det: Dict[str, object] = {}
    rep = is_plane(output)
    plane = rep.plane
    if not plane:
        det["crossings"] = rep.count
    dev = check_devillers(output, ref)
    exact = True
    within = True
    eps = to_fraction(request.eps)
    for it, t in zip(request.items, request.targets):
        t = to_fraction(t)
        if isinstance(it, VertexItem):
            x, y = output.coords[it.v]
            y = to_fraction(y)
            tol = 0 if isinstance(output.coords[it.v][1], Fraction) else Fraction(vertex_tol) * max(1, abs(t))
            if x != 0 or abs(y - t) > tol:
                exact = False
                det.setdefault("off_target", []).append(it.v)
        else:
            u, v = it.e
            if side_of(output.coords[u][0]) * side_of(output.coords[v][0]) != -1:
                within = False
                continue
            y = line_intercept(output.coords[u], output.coords[v])
            if abs(y - t) > eps + Fraction(edge_slack):
                within = False
                det.setdefault("outside_window", []).append(it.e)
    try:
        obs = crossing_sequence_of(output, exact=True)
        order = list(obs.items) == list(request.items)
    except DegenerateCrossing:
        order = False
    sides_ok = all(output.side(v) == s for v, s in request.sides.items() if v in output.coords)
    return VerificationReport(plane, dev, exact, within, order, sides_ok, det)


# ---------------------------------------------------------------------------
# fault injection


def mutate_moved_vertex(d: StraightLineDrawing, inst: ReductionInstance, rng) -> StraightLineDrawing:
    """Shift one vertex item off its target (or, without vertex items, push an
    edge crossing out of its window)."""
    vs = [it.v for it in inst.items if isinstance(it, VertexItem)]
    gap = min((b - a for a, b in zip(inst.targets, inst.targets[1:])), default=1)
    coords = dict(d.coords)
    if vs:
        v = vs[int(rng.integers(len(vs)))]
        x, y = coords[v]
        coords[v] = (x, y + type(y)(gap) / 7)
        return d.with_coords(coords)
    return mutate_swapped_order(d, inst, rng)


def mutate_swapped_order(d: StraightLineDrawing, inst: ReductionInstance, rng) -> StraightLineDrawing:
    """Move an endpoint of an edge item so that its crossing jumps past the next item."""
    k = len(inst.items)
    cands = [i for i in range(k - 1) if isinstance(inst.items[i], EdgeItem)]
    if not cands:
        cands = [i for i in range(1, k) if isinstance(inst.items[i], EdgeItem)]
        back = True
    else:
        back = False
    i = cands[int(rng.integers(len(cands)))]
    j = i - 1 if back else i + 1
    u, v = inst.items[i].e
    coords = dict(d.coords)
    p, q = (u, v)
    if p in set(inst.T.outer_vertices()):
        p, q = q, p
    beyond = inst.items[j + 1] if (not back and j + 1 < k) else (inst.items[j - 1] if back and j > 0 else None)
    yj = _item_height(d, inst.items[j])
    if beyond is not None:
        yb = _item_height(d, beyond)
        goal = (yj + yb) / 2
    else:
        goal = 2 * yj - _item_height(d, inst.items[i])
    px, py = map(to_fraction, coords[p])
    qx, qy = map(to_fraction, coords[q])
    ny = (goal * (qx - px) + qy * px) / qx
    coords[p] = (coords[p][0], type(coords[p][1])(ny))
    return d.with_coords(coords)


def _item_height(d: StraightLineDrawing, it) -> Fraction:
    if isinstance(it, VertexItem):
        return to_fraction(d.coords[it.v][1])
    return line_intercept(d.coords[it.e[0]], d.coords[it.e[1]])


def mutate_crossing_nudge(d: StraightLineDrawing, inst: ReductionInstance, rng) -> StraightLineDrawing:
    """Reflect an inner vertex through the far edge of one of its faces."""
    emb = d.embedding
    outer = set(emb.outer_vertices())
    inner = [v for v in emb.vertices if v not in outer]
    v = inner[int(rng.integers(len(inner)))]
    ns = emb.rot[v]
    i = int(rng.integers(len(ns)))
    a, b = ns[i], ns[(i + 1) % len(ns)]
    coords = dict(d.coords)
    pa, pb, pv = coords[a], coords[b], coords[v]
    t = type(pv[0])
    coords[v] = (pa[0] + pb[0] - pv[0] + t(0), pa[1] + pb[1] - pv[1] + t(0))
    return d.with_coords(coords)


MUTATIONS = {"moved_vertex": mutate_moved_vertex, "swapped_order": mutate_swapped_order,
             "crossing_nudge": mutate_crossing_nudge}


def write_fixture_files(directory) -> List[str]:
    """Regenerate the shipped JSON fixtures (deterministic)."""
    from pathlib import Path

    out = []
    for name in FIXTURE_NAMES:
        doc = build_fixture(name).document()
        path = Path(directory) / f"{name}.json"
        path.write_text(doc.dumps())
        out.append(str(path))
    return out
