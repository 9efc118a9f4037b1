"""Top-level realisation of collinear vertex sets.

``draw_collinear`` moves the axis vertices of a witness drawing to any
increasing list of heights; ``realize_free_set`` moves them to arbitrary
distinct points by drawing on a rotated axis and stretching horizontally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import triangle

from .agraph import Tolerances
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
from .errors import (
    DeltaSearchFailed,
    IncompatibleOuterShape,
    InconsistentSides,
    NotPlaneWitness,
    PreconditionFailed,
    TargetsNotIncreasing,
)
from .exact import Number, convert, orient, signed_area2, to_fraction
from .reducer import ReductionInstance, ReductionResult, TraceNode, draw_triangulation


@dataclass(frozen=True, eq=False)
class FreeSetRequest:
    """A witness drawing with the set S on the axis, plus where S should go.

    ``targets`` are heights (for ``draw_collinear``) or points (for
    ``realize_free_set``).  Heights correspond to ``S`` in the given order.
    """

    witness: StraightLineDrawing
    S: Tuple[Vertex, ...]
    targets: Tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "S", tuple(self.S))
        object.__setattr__(self, "targets", tuple(self.targets))


@dataclass
class TriangulatedWitness:
    drawing: StraightLineDrawing          # triangulated witness, frame included
    added: List[Edge]                     # edges not in the input graph
    frame: Tuple[Vertex, ...] = ()        # frame vertices (alpha, beta, gamma) or empty
    on_curve: List[Edge] = field(default_factory=list)


@dataclass
class PipelineResult:
    drawing: StraightLineDrawing
    trace: TraceNode
    instance: ReductionInstance
    triangulated: TriangulatedWitness
    full: StraightLineDrawing             # triangulated output before edge removal
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# request checks


def _check_witness(req: FreeSetRequest) -> None:
    d = req.witness
    rep = is_plane(d)
    if not rep.plane:
        raise NotPlaneWitness("witness drawing has crossings", pairs=[list(map(str, p)) for p in rep.pairs[:3]])
    for v in req.S:
        if v not in d.coords:
            raise InconsistentSides("collinear vertex missing from the witness", vertex=v)
        if d.coords[v][0] != 0:
            raise InconsistentSides("collinear vertex is not on the axis in the witness", vertex=v)
    if len(set(req.S)) != len(req.S) or not req.S:
        raise PreconditionFailed("collinear set must be non-empty and without repeats")


def _ordered_S(req: FreeSetRequest) -> List[Vertex]:
    return sorted(req.S, key=lambda v: to_fraction(req.witness.coords[v][1]))


def _clear_axis(d: StraightLineDrawing, S: Sequence[Vertex]) -> StraightLineDrawing:
    """Push vertices outside S off the axis without changing the rotation system."""
    extra = [v for v in d.embedding.vertices if d.coords[v][0] == 0 and v not in set(S)]
    if not extra:
        return d
    coords = dict(d.coords)
    scale = d.bbox_scale()
    for v in extra:
        step = Fraction(2) ** (floor(np.log2(scale)) - 4)
        for _ in range(200):
            ok = False
            for sgn in (1, -1):
                x, y = coords[v]
                trial = dict(coords)
                trial[v] = (convert(sgn * step, isinstance(y, Fraction)), y)
                t = d.with_coords(trial)
                if is_plane(t).plane and check_devillers(t, d.embedding):
                    coords = trial
                    ok = True
                    break
            if ok:
                break
            step /= 2
        else:
            raise NotPlaneWitness("cannot move a vertex off the axis", vertex=v)
    return d.with_coords(coords)


# ---------------------------------------------------------------------------
# triangulation


def _fresh_ids(vertices: Sequence[Vertex], k: int) -> List[Vertex]:
    if vertices and all(isinstance(v, int) for v in vertices):
        base = max(vertices) + 1
        return [base + i for i in range(k)]
    taken = set(map(str, vertices))
    out = []
    i = 0
    while len(out) < k:
        name = f"_frame{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return out


def triangulate_preserving_curve(req: FreeSetRequest) -> TriangulatedWitness:
    """Complete the witness to a triangulation in which the axis meets every
    added edge properly.

    Consecutive axis vertices with nothing between them on the axis are joined
    by an edge on the axis first; a frame triangle (two corners below the
    drawing on opposite sides, one apex on the axis above it) is added unless
    the witness already is a triangulation.  The rest is a constrained
    Delaunay triangulation, verified exactly.
    """
    _check_witness(req)
    d = _clear_axis(req.witness, req.S)
    emb = d.embedding
    base_edges = set(emb.edges())
    if emb.n() >= 3 and emb.is_triangulation():
        return TriangulatedWitness(d, [], (), [])
    seq = crossing_sequence_of(d, exact=True)
    on_curve = []
    for a, b in zip(seq.items, seq.items[1:]):
        if isinstance(a, VertexItem) and isinstance(b, VertexItem):
            e = ekey(a.v, b.v)
            if e not in base_edges:
                on_curve.append(e)
    verts = list(emb.vertices)
    xs = [to_fraction(d.coords[v][0]) for v in verts]
    ys = [to_fraction(d.coords[v][1]) for v in verts]
    M = int(max(abs(x) for x in xs)) + 1
    lo = floor(min(ys)) - 1
    ymax = int(np.ceil(float(max(ys))))
    hi = ymax + (ymax - lo) + 1
    W = 2 * M + 2
    fa, fb, fc = _fresh_ids(verts, 3)
    coords = dict(d.coords)
    rational = any(isinstance(c, Fraction) for p in coords.values() for c in p)
    coords[fa] = (convert(-W, rational), convert(lo, rational))
    coords[fb] = (convert(W, rational), convert(lo, rational))
    coords[fc] = (convert(0, rational), convert(hi, rational))
    allv = verts + [fa, fb, fc]
    idx = {v: i for i, v in enumerate(allv)}
    pts = np.array([[float(coords[v][0]), float(coords[v][1])] for v in allv])
    segs = [(idx[u], idx[v]) for u, v in base_edges | set(on_curve)]
    segs += [(idx[fa], idx[fb]), (idx[fb], idx[fc]), (idx[fc], idx[fa])]
    t = triangle.triangulate({"vertices": pts, "segments": np.array(segs, dtype=np.int32)}, "pYYQ")
    if len(t["vertices"]) != len(allv):
        raise NotPlaneWitness("triangulation needed extra points; the witness is degenerate")
    edges = set()
    for tri in t["triangles"]:
        a, b, c = (allv[int(i)] for i in tri)
        edges |= {ekey(a, b), ekey(b, c), ekey(a, c)}
    missing = (base_edges | set(on_curve)) - edges
    if missing:
        raise NotPlaneWitness("constraint edges lost in triangulation", edges=[list(map(str, e)) for e in missing])
    full = StraightLineDrawing.from_edges(coords, edges)
    if not full.embedding.is_triangulation() or not is_plane(full).plane:
        raise NotPlaneWitness("triangulated witness fails exact verification")
    added = sorted(edges - base_edges, key=lambda e: (str(e[0]), str(e[1])))
    return TriangulatedWitness(full, added, (fa, fb, fc), on_curve)


# ---------------------------------------------------------------------------
# targets and outer shape


def _extend_targets(items, anchors: Dict[int, Number], step: Number) -> List[Number]:
    """Fill edge-item targets uniformly between anchored positions."""
    k = len(items)
    out: List[Optional[Number]] = [None] * k
    for i, t in anchors.items():
        out[i] = t
    keys = sorted(anchors)
    first, last = keys[0], keys[-1]
    for i in range(first):
        out[i] = anchors[first] - step * (first - i)
    for i in range(last + 1, k):
        out[i] = anchors[last] + step * (i - last)
    for a, b in zip(keys, keys[1:]):
        for i in range(a + 1, b):
            out[i] = anchors[a] + (anchors[b] - anchors[a]) * (i - a) / (b - a)
    return out  # type: ignore[return-value]


def compatible_outer_shape(outer: Sequence[Vertex], sides: Mapping[Vertex, Side],
                           target_of: Mapping[object, Number], rational: bool = False) -> Dict[Vertex, Tuple]:
    """A triangle for the outer face meeting the axis at the requested places.

    ``target_of`` maps outer axis vertices and outer crossing edges (as sorted
    pairs) to heights.  The triangle is returned for the clockwise outer cycle.
    """
    c = lambda v: convert(v, rational)  # noqa: E731
    vals = [to_fraction(t) for t in target_of.values()]
    span = (max(vals) - min(vals)) if vals else Fraction(1)
    W = max(Fraction(1), span)
    ys_side = {s: [v for v in outer if sides[v] == s] for s in (Side.L, Side.Y, Side.R)}
    pos: Dict[Vertex, Tuple] = {}
    for v in ys_side[Side.Y]:
        pos[v] = (c(0), c(target_of[v]))
    nl, nr = len(ys_side[Side.L]), len(ys_side[Side.R])
    if nl == 0 and nr == 0:
        raise IncompatibleOuterShape("outer face lies on the axis")
    if nl and nr:
        lone, many = (ys_side[Side.L], ys_side[Side.R]) if nl <= nr else (ys_side[Side.R], ys_side[Side.L])
        sl = sides[lone[0]]
        if len(many) == 1:
            t = to_fraction(target_of[ekey(lone[0], many[0])])
            pos[lone[0]] = (c(int(sl) * W), c(t))
            pos[many[0]] = (c(-int(sl) * W), c(t))
        else:
            ts = [to_fraction(target_of[ekey(lone[0], w)]) for w in many]
            b = sum(ts) / len(ts)
            pos[lone[0]] = (c(int(sl) * W), c(b))
            for w, t in zip(many, ts):
                pos[w] = (c(-int(sl) * W), c(2 * t - b))
    else:
        s = Side.L if nl else Side.R
        off = ys_side[s]
        ty = [to_fraction(target_of[v]) for v in ys_side[Side.Y]]
        mid = sum(ty) / len(ty)
        if len(off) == 1:
            pos[off[0]] = (c(int(s) * W), c(mid))
        else:
            pos[off[0]] = (c(int(s) * W), c(mid - W))
            pos[off[1]] = (c(int(s) * W), c(mid + W))
            if signed_area2([pos[v] for v in outer]) >= 0:
                pos[off[0]], pos[off[1]] = pos[off[1]], pos[off[0]]
    if signed_area2([pos[v] for v in outer]) >= 0 or orient(*(pos[v] for v in outer)) == 0:
        raise IncompatibleOuterShape("no outer triangle with this orientation meets the targets")
    return pos


# ---------------------------------------------------------------------------
# collinear targets


def build_instance(req: FreeSetRequest, rational: bool = False
                   ) -> Tuple[ReductionInstance, TriangulatedWitness, List[Vertex]]:
    _check_witness(req)
    order = _ordered_S(req)
    tmap = dict(zip(req.S, req.targets))
    if len(req.targets) != len(req.S):
        raise PreconditionFailed("one target per collinear vertex is required",
                                 vertices=len(req.S), targets=len(req.targets))
    ys = [convert(tmap[v], rational) for v in order]
    if any(not a < b for a, b in zip(ys, ys[1:])):
        raise TargetsNotIncreasing("targets must increase along the axis order of the collinear set")
    tw = triangulate_preserving_curve(req)
    d = tw.drawing
    seq = crossing_sequence_of(d, exact=True)
    gap = min((b - a for a, b in zip(ys, ys[1:])), default=convert(1, rational))
    span = ys[-1] - ys[0] if len(ys) > 1 else convert(1, rational)
    anchors: Dict[int, Number] = {}
    index = {it.v: i for i, it in enumerate(seq.items) if isinstance(it, VertexItem)}
    for v, y in zip(order, ys):
        anchors[index[v]] = y
    frame_targets = {}
    if tw.frame:
        fa, fb, fc = tw.frame
        lo, hi = ys[0] - max(span, convert(1, rational)), ys[-1] + max(span, convert(1, rational))
        anchors[0] = lo
        anchors[len(seq.items) - 1] = hi
        frame_targets = {fa: lo, fb: lo, fc: hi}
    targets = _extend_targets(seq.items, anchors, gap / 2)
    gaps = [b - a for a, b in zip(targets, targets[1:])]
    eps = min(gaps) / 3 if gaps else convert(1, rational)
    T = d.embedding
    sides = d.sides()
    if tw.frame:
        fa, fb, fc = tw.frame
        W = (frame_targets[fc] - frame_targets[fa])
        delta = {fa: (-W, frame_targets[fa]), fb: (W, frame_targets[fb]), fc: (convert(0, rational), frame_targets[fc])}
    else:
        tof: Dict[object, Number] = {}
        outer = T.outer_vertices()
        for i, it in enumerate(seq.items):
            key = it.v if isinstance(it, VertexItem) else ekey(*it.e)
            tof[key] = targets[i]
        tof = {k: v for k, v in tof.items()
               if (k in outer) or (isinstance(k, tuple) and k[0] in outer and k[1] in outer and T.has_edge(*k)
                                   and k in {ekey(outer[i], outer[(i + 1) % 3]) for i in range(3)})}
        delta = compatible_outer_shape(outer, sides, tof, rational)
    cs = CrossingSequence(seq.items, tuple(targets), eps)
    inst = ReductionInstance.create(T, cs, delta, sides, rational)
    return inst, tw, order


def _strip(full: StraightLineDrawing, original: CombinatorialEmbedding) -> StraightLineDrawing:
    return StraightLineDrawing(original, {v: full.coords[v] for v in original.vertices})


def draw_collinear(req: FreeSetRequest, rational: bool = False, tol: Tolerances = Tolerances(),
                   eps_policy: str = "window") -> PipelineResult:
    """Draw the witness graph with S at (0, target) and the same rotation system."""
    inst, tw, order = build_instance(req, rational)
    res: ReductionResult = draw_triangulation(inst, rational=rational, tol=tol, eps_policy=eps_policy)
    out = _strip(res.drawing, req.witness.embedding)
    return PipelineResult(out, res.trace, inst, tw, res.drawing)


# ---------------------------------------------------------------------------
# arbitrary target points


_ROTATIONS = [None] + [k for k in (64, 32, 16, 8, 4, 2, 1)]


def _rotation(k: Optional[int]) -> Tuple[Fraction, Fraction]:
    """(cos, sin) of the angle whose half-angle tangent is 1/k."""
    if k is None:
        return Fraction(1), Fraction(0)
    t = Fraction(1, k)
    return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


def _rot(p, cs, inverse=False):
    c, s = cs
    x, y = p
    if inverse:
        return (c * x - s * y, s * x + c * y)
    return (c * x + s * y, -s * x + c * y)


def choose_rotation(points: Sequence[Tuple]) -> Tuple[Fraction, Fraction]:
    """Smallest listed rotation after which all points have distinct heights."""
    P = [(to_fraction(x), to_fraction(y)) for x, y in points]
    for k in _ROTATIONS:
        cs = _rotation(k)
        ys = [_rot(p, cs)[1] for p in P]
        if len(set(ys)) == len(ys):
            return cs
    for k in range(3, 10_000):
        cs = _rotation(k)
        ys = [_rot(p, cs)[1] for p in P]
        if len(set(ys)) == len(ys):
            return cs
    raise PreconditionFailed("target points are not distinct")


def realize_free_set(req: FreeSetRequest, rational: bool = False, tol: Tolerances = Tolerances(),
                     floor_exp: int = 60) -> PipelineResult:
    """Draw the witness graph with S on the given points (treated as a set).

    S is matched to the points by height after rotation, in the axis order of
    the witness.
    """
    pts = [(to_fraction(p[0]), to_fraction(p[1])) for p in req.targets]
    if len(pts) != len(req.S):
        raise PreconditionFailed("one point per collinear vertex is required")
    if len(set(pts)) != len(pts):
        raise PreconditionFailed("target points are not distinct")
    order = _ordered_S(req)
    if all(p[0] == 0 for p in pts):
        srt = sorted(pts, key=lambda p: p[1])
        sub = FreeSetRequest(req.witness, tuple(order), tuple(p[1] for p in srt))
        res = draw_collinear(sub, rational, tol)
        res.extra.update({"rotation": (1, 0), "delta": None, "assignment": dict(zip(order, srt))})
        return res
    cs = choose_rotation(pts)
    rp = [_rot(p, cs) for p in pts]
    srt = sorted(range(len(pts)), key=lambda i: rp[i][1])
    assign = {v: pts[i] for v, i in zip(order, srt)}
    rassign = {v: rp[i] for v, i in zip(order, srt)}
    sub = FreeSetRequest(req.witness, tuple(order), tuple(rassign[v][1] for v in order))
    res = draw_collinear(sub, rational, tol)
    base = res.drawing
    emb = base.embedding
    delta = Fraction(1)
    history = []
    found = None
    for _ in range(floor_exp + 1):
        coords = dict(base.coords)
        for v in order:
            x = rassign[v][0] * delta
            coords[v] = (convert(x, rational), coords[v][1])
        d = base.with_coords(coords)
        ok = is_plane(d).plane and check_devillers(d, emb)
        history.append((delta, ok))
        if ok:
            found = delta
            break
        delta /= 2
    if found is None:
        raise DeltaSearchFailed("no perturbation size keeps the drawing plane", floor=f"2^-{floor_exp}",
                                hint="retry in rational mode")
    delta = found / 2  # one extra halving for margin
    out = {}
    for v, p in base.coords.items():
        if v in rassign:
            q = assign[v]
            out[v] = (convert(q[0], rational), convert(q[1], rational))
            continue
        x = to_fraction(p[0]) / delta
        y = to_fraction(p[1])
        ix, iy = _rot((x, y), cs, inverse=True)
        out[v] = (convert(ix, rational), convert(iy, rational))
    final = base.with_coords(out)
    if not (is_plane(final).plane and check_devillers(final, emb)):
        raise DeltaSearchFailed("final drawing fails verification after the inverse transform",
                                hint="retry in rational mode")
    res.extra.update({"rotation": cs, "delta": delta, "delta_history": history, "assignment": assign})
    return PipelineResult(final, res.trace, res.instance, res.triangulated, res.full, res.extra)
