"""Recursive drawing of a triangulation with prescribed axis crossings.

An instance is a triangulation, the ordered list of vertices and edges that the
axis meets (with a target coordinate for each), a side for every vertex and a
prescribed outer triangle.  Vertex items must land exactly on their targets and
edge items inside a window around theirs.  The instance is reduced, in order
of priority, by splitting on a separating triangle, contracting an edge that
is far from the axis, flipping an edge, or replacing an edge lying on the
axis.  What remains is an A-graph plus diagonals, drawn by the slope solver.

Windows.  Every edge item carries its own half-width (``radii``); windows of
consecutive items are pairwise disjoint, vertex items have radius zero.  A
child instance produced by contraction keeps the parent's windows and the
uncontracted vertex is placed inside the intersection of those windows with
the kernel of its star.  The stricter bookkeeping that halves the tolerance at
every contraction and split is available as ``eps_policy="halve"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .agraph import AGraph, Tolerances, build_agraph, draw_a_graph
from .drawing import CrossingSequence, EdgeItem, Item, Side, StraightLineDrawing, VertexItem, is_plane
from .embedding import CombinatorialEmbedding, Edge, Vertex, ekey
from .errors import (
    BaseCaseNotAGraph,
    EmptyKernel,
    FreeSetError,
    InconsistentSides,
    IncompatibleOuterShape,
    NotAGraph,
    NotSeparating,
    PreconditionFailed,
    SingularSystem,
    TargetsNotIncreasing,
)
from .exact import Number, convert, line_intercept, orient, signed_area2, to_fraction
from .linalg import solve_rational
from .regions import bounding_box, interior_point, line_left, side_constraint, window_constraints

Coords = Dict[Vertex, Tuple[Number, Number]]


# ---------------------------------------------------------------------------
# instance


@dataclass(frozen=True, eq=False)
class ReductionInstance:
    T: CombinatorialEmbedding
    items: Tuple[Item, ...]
    targets: Tuple[Number, ...]
    radii: Tuple[Number, ...]
    eps: Number
    delta: Mapping[Vertex, Tuple[Number, Number]]
    sides: Mapping[Vertex, Side]

    @staticmethod
    def create(T: CombinatorialEmbedding, seq: CrossingSequence, delta, sides,
               rational: bool = False) -> "ReductionInstance":
        """Top-level constructor: uniform windows of half-width eps on edge items."""
        outer = set(T.outer_vertices())
        outer_edges = {ekey(*e) for e in _cycle_edges(T.outer_vertices())}
        eps = convert(seq.eps, rational)
        radii = []
        for it in seq.items:
            if isinstance(it, EdgeItem) and ekey(*it.e) not in outer_edges:
                radii.append(eps)
            else:
                radii.append(convert(0, rational))
        inst = ReductionInstance(
            T, tuple(seq.items), tuple(convert(t, rational) for t in seq.targets), tuple(radii), eps,
            {v: tuple(convert(c, rational) for c in delta[v]) for v in outer},
            {v: Side(int(s)) for v, s in sides.items()})
        check_instance(inst, top_level=True)
        return inst

    def crossing_sequence(self) -> CrossingSequence:
        return CrossingSequence(self.items, self.targets, self.eps)

    def item_index(self) -> Dict[object, int]:
        out = {}
        for i, it in enumerate(self.items):
            out[it.v if isinstance(it, VertexItem) else ("e",) + ekey(*it.e)] = i
        return out

    def windows(self) -> Dict[Edge, Tuple[Number, Number]]:
        out = {}
        for it, t, r in zip(self.items, self.targets, self.radii):
            if isinstance(it, EdgeItem):
                out[ekey(*it.e)] = (t - r, t + r)
        return out


def _cycle_edges(cyc: Sequence[Vertex]) -> List[Tuple[Vertex, Vertex]]:
    k = len(cyc)
    return [(cyc[i], cyc[(i + 1) % k]) for i in range(k)]


def check_instance(inst: ReductionInstance, top_level: bool = False) -> None:
    """Validate triangulation, sides, item list, windows and outer shape."""
    T = inst.T
    if not T.is_triangulation() or T.outer is None:
        raise PreconditionFailed("instance graph is not a triangulation with an outer face")
    sides = inst.sides
    item_vertices = [it.v for it in inst.items if isinstance(it, VertexItem)]
    item_edges = [ekey(*it.e) for it in inst.items if isinstance(it, EdgeItem)]
    if set(item_vertices) != {v for v in T.vertices if sides[v] == Side.Y}:
        raise InconsistentSides("vertex items differ from the vertices on the curve")
    crossing = {e for e in T.edges() if sides[e[0]] * sides[e[1]] == -1}
    if set(item_edges) != crossing or len(item_edges) != len(set(item_edges)):
        raise InconsistentSides("edge items differ from the crossing edges")
    pos = {v: i for i, v in enumerate(inst.items) if isinstance(v, VertexItem)}
    vpos = {it.v: i for i, it in enumerate(inst.items) if isinstance(it, VertexItem)}
    for u, v in T.edges():
        if sides[u] == Side.Y and sides[v] == Side.Y and abs(vpos[u] - vpos[v]) != 1:
            raise InconsistentSides("edge joins two curve vertices that are not consecutive", edge=(u, v))
    t, r = inst.targets, inst.radii
    for i in range(len(t) - 1):
        if not t[i] + r[i] < t[i + 1] - r[i + 1]:
            raise TargetsNotIncreasing("target windows overlap or are out of order", index=i)
    if top_level and len(t) > 1 and not inst.eps < (min(b - a for a, b in zip(t, t[1:])) / 2):
        raise TargetsNotIncreasing("tolerance must be below half the smallest gap")
    outer = T.outer_vertices()
    if inst.items:
        oe = {ekey(*e) for e in _cycle_edges(outer)}
        for it in (inst.items[0], inst.items[-1]):
            ok = (it.v in outer) if isinstance(it, VertexItem) else (ekey(*it.e) in oe)
            if not ok:
                raise InconsistentSides("curve does not reach the outer face")
    _check_delta(inst)


def _check_delta(inst: ReductionInstance) -> None:
    outer = inst.T.outer_vertices()
    d = inst.delta
    if set(d) != set(outer):
        raise IncompatibleOuterShape("outer shape vertices differ from the outer face")
    if signed_area2([d[v] for v in outer]) >= 0:
        raise IncompatibleOuterShape("outer shape has the wrong orientation")
    idx = inst.item_index()
    for v in outer:
        x, y = d[v]
        s = Side.R if x > 0 else Side.L if x < 0 else Side.Y
        if s != inst.sides[v]:
            raise IncompatibleOuterShape("outer vertex on the wrong side", vertex=v)
        if s == Side.Y and not _close(y, inst.targets[idx[v]]):
            raise IncompatibleOuterShape("outer curve vertex off target", vertex=v)
    for u, w in _cycle_edges(outer):
        k = ("e",) + ekey(u, w)
        if k in idx:
            yi = line_intercept(d[u], d[w])
            if not _close(yi, inst.targets[idx[k]]):
                raise IncompatibleOuterShape("outer edge crosses off target", edge=(u, w))


def _close(a: Number, b: Number) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= 1e-9 * max(1.0, abs(float(a)), abs(float(b)))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class EdgeClasses:
    classes: Mapping[Edge, str]                # crossing | marked | unmarked
    crossing_faces: frozenset                  # faces as frozensets of vertices
    faces: Tuple[Tuple[Vertex, ...], ...]

    def of(self, u: Vertex, v: Vertex) -> str:
        return self.classes[ekey(u, v)]


def classify_edges(inst: ReductionInstance) -> EdgeClasses:
    s = inst.sides
    for v in inst.T.vertices:
        if v not in s:
            raise InconsistentSides("vertex without a side", vertex=v)
    cls = {}
    for u, v in inst.T.edges():
        if s[u] * s[v] == -1:
            cls[(u, v)] = "crossing"
        elif s[u] == Side.Y or s[v] == Side.Y:
            cls[(u, v)] = "marked"
        else:
            cls[(u, v)] = "unmarked"
    faces = tuple(inst.T.faces())
    cf = set()
    for f in faces:
        n = sum(1 for a, b in _cycle_edges(f) if cls[ekey(a, b)] == "crossing")
        if n >= 2:
            cf.add(frozenset(f))
    return EdgeClasses(cls, frozenset(cf), faces)


def find_separating_triangle(T: CombinatorialEmbedding) -> Optional[Tuple[Vertex, Vertex, Vertex]]:
    facial = {frozenset(f) for f in T.faces() if len(f) == 3}
    best = None
    for u, v in T.edges():
        small, big = (u, v) if T.degree(u) <= T.degree(v) else (v, u)
        for w in T.rot[small]:
            if w == big or not T.has_edge(w, big):
                continue
            tri = tuple(sorted((u, v, w)))
            if frozenset(tri) in facial:
                continue
            if best is None or tri < best:
                best = tri
    return best


def _face_apexes(T: CombinatorialEmbedding, x: Vertex, y: Vertex) -> Tuple[Vertex, Vertex]:
    """(apex of face left of (x, y), apex of face left of (y, x))."""
    return T.ccw_before(y, x), T.ccw_before(x, y)


def find_contractible_edge(inst: ReductionInstance, ec: Optional[EdgeClasses] = None
                           ) -> Optional[Tuple[Vertex, Vertex]]:
    """Unmarked inner edge on no crossing face and no separating triangle.

    Returned as ``(keep, merge)``: the merged vertex is never an outer vertex.
    """
    ec = ec or classify_edges(inst)
    T = inst.T
    outer = set(T.outer_vertices())
    for (u, v), c in ec.classes.items():
        if c != "unmarked":
            continue
        if u in outer and v in outer:
            continue
        a, b = _face_apexes(T, u, v)
        if frozenset((u, v, a)) in ec.crossing_faces or frozenset((u, v, b)) in ec.crossing_faces:
            continue
        if set(T.rot[u]) & set(T.rot[v]) != {a, b}:
            continue
        return (v, u) if v in outer else (u, v)
    return None


@dataclass(frozen=True)
class FlipMatch:
    x: Vertex
    y: Vertex
    z: Vertex
    a: Vertex
    b: Vertex
    c: Vertex
    case: str


def _positions(inst: ReductionInstance) -> Dict[Edge, int]:
    return {ekey(*it.e): i for i, it in enumerate(inst.items) if isinstance(it, EdgeItem)}


def _monotone(ps: Sequence[Optional[int]]) -> bool:
    if any(p is None for p in ps):
        return False
    return all(p < q for p, q in zip(ps, ps[1:])) or all(p > q for p, q in zip(ps, ps[1:]))


def find_flippable_edges(inst: ReductionInstance, ec: Optional[EdgeClasses] = None) -> List[FlipMatch]:
    ec = ec or classify_edges(inst)
    T = inst.T
    pos = _positions(inst)
    outer = frozenset(T.outer_vertices())
    out = []
    for (p, q), cl in ec.classes.items():
        if cl != "unmarked":
            continue
        for x, y in ((p, q), (q, p)):
            z = T.ccw_before(y, x)       # face x y z on the left of (x, y)
            b = T.ccw_before(x, y)       # face y x b on the left of (y, x)
            if frozenset((x, y, z)) in ec.crossing_faces or frozenset((x, y, z)) == outer:
                continue
            if frozenset((x, y, b)) not in ec.crossing_faces:
                continue
            c = T.ccw_before(y, z)       # apex of the face across yz
            a = T.ccw_before(z, x)       # apex of the face across xz
            if len({x, y, z, a, b, c}) != 6:
                continue
            if frozenset((z, y, c)) not in ec.crossing_faces or frozenset((x, z, a)) not in ec.crossing_faces:
                continue
            P = lambda u, w: pos.get(ekey(u, w))  # noqa: E731
            seq_a = [P(z, a), P(x, a), P(x, b), P(y, b), P(y, c), P(z, c)]
            if _monotone(seq_a):
                out.append(FlipMatch(x, y, z, a, b, c, "3a"))
                continue
            seq_b = [P(x, a), P(x, b), P(y, b), P(y, c), P(z, c), P(z, a)]
            if frozenset((x, z, a)) == outer and _monotone(seq_b):
                out.append(FlipMatch(x, y, z, a, b, c, "3b"))
    return out


def find_flippable_edge(inst: ReductionInstance, ec: Optional[EdgeClasses] = None) -> Optional[FlipMatch]:
    ms = find_flippable_edges(inst, ec)
    return ms[0] if ms else None


def find_edge_on_curve(inst: ReductionInstance) -> Optional[Tuple[Vertex, Vertex]]:
    outer_edges = {ekey(*e) for e in _cycle_edges(inst.T.outer_vertices())}
    for u, v in inst.T.edges():
        if inst.sides[u] == Side.Y and inst.sides[v] == Side.Y and (u, v) not in outer_edges:
            return (u, v)
    return None


# ---------------------------------------------------------------------------
# trace


@dataclass
class TraceNode:
    kind: str                       # Split | Contract | Flip | OnCurve | Base | Small | Tutte
    data: dict = field(default_factory=dict)
    children: List["TraceNode"] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": _jsonable(self.data),
                "children": [c.to_json() for c in self.children]}

    def histogram(self, acc: Optional[Dict[str, int]] = None) -> Dict[str, int]:
        acc = {} if acc is None else acc
        acc[self.kind] = acc.get(self.kind, 0) + 1
        for c in self.children:
            c.histogram(acc)
        return acc

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def replay_edges(node: TraceNode) -> set:
    """Edge set of the instance a trace node was produced from (bottom-up)."""
    k, d = node.kind, node.data
    if k in ("Base", "Small", "Tutte", "Trivial"):
        return {tuple(e) for e in d["edges"]}
    if k == "Split":
        plus = replay_edges(node.children[0])
        minus = replay_edges(node.children[1]) if len(node.children) > 1 else {tuple(e) for e in d["inner_edges"]}
        return plus | minus
    child = replay_edges(node.children[0])
    if k in ("Flip", "OnCurve"):
        child.discard(tuple(d["added"]))
        child.add(tuple(d["removed"]))
        return child
    if k == "Contract":
        x, y = d["keep"], d["merge"]
        out = {e for e in child if x not in e}
        out.add(ekey(x, y))
        for w in d["keep_nbrs"]:
            out.add(ekey(x, w))
        for w in d["merge_nbrs"]:
            out.add(ekey(y, w))
        return out
    raise ValueError(k)


# ---------------------------------------------------------------------------
# geometric helpers


def _face_constraints(T: CombinatorialEmbedding, v: Vertex, coords: Coords) -> list:
    ns = T.rot[v]
    cons = []
    outer = frozenset(T.outer_vertices())
    for i in range(len(ns)):
        a, b = ns[i], ns[(i + 1) % len(ns)]
        if frozenset((v, a, b)) == outer:
            continue
        cons.append(line_left(coords[a], coords[b]))
    return cons


def _vertex_constraints(inst: ReductionInstance, v: Vertex, coords: Coords) -> list:
    T = inst.T
    cons = _face_constraints(T, v, coords)
    side = inst.sides[v]
    cons.append(side_constraint(int(side)))
    win = inst.windows()
    for w in T.rot[v]:
        if inst.sides[w] * side == -1:
            lo, hi = win[ekey(v, w)]
            cons.extend(window_constraints(coords[w], lo, hi))
    return cons


def _place(inst: ReductionInstance, v: Vertex, coords: Coords, rational: bool) -> Optional[Tuple]:
    cons = _vertex_constraints(inst, v, coords)
    box = bounding_box([coords[w] for w in inst.T.rot[v]], pad=0.01)
    return interior_point(box, cons, rational)


def _valid_at(inst: ReductionInstance, v: Vertex, p, coords: Coords) -> bool:
    from .regions import satisfied

    return satisfied(p, _vertex_constraints(inst, v, coords))


def uncontract_placement(inst: ReductionInstance, coords: Coords, keep: Vertex, merge: Vertex,
                         rational: bool = False, rounds: int = 2, radius: Optional[Number] = None) -> Coords:
    """Place ``merge`` next to ``keep`` (which sits where the contracted vertex was).

    The merged vertex goes to the centroid of its feasible region (star kernel,
    its side of the axis, and the windows of its crossing edges); then both
    vertices are alternately re-centred.  ``radius`` optionally restricts the
    first placement to a box of that half-width around the contracted vertex.
    """
    T = inst.T
    outer = set(T.outer_vertices())
    coords = dict(coords)
    v = coords[keep]
    cons = _vertex_constraints(inst, merge, {**coords, merge: v})
    box = bounding_box([coords[w] if w != keep else v for w in T.rot[merge]], pad=0.01)
    if radius is not None:
        r = to_fraction(radius)
        vx, vy = to_fraction(v[0]), to_fraction(v[1])
        box = [(vx - r, vy - r), (vx + r, vy - r), (vx + r, vy + r), (vx - r, vy + r)]
    p = interior_point(box, cons, rational)
    if p is None:
        p = _bisector_fallback(inst, coords, keep, merge, rational)
    coords[merge] = p
    for _ in range(rounds):
        for w in (keep, merge):
            if w in outer:
                continue
            q = _place(inst, w, coords, rational)
            if q is not None and _valid_at(inst, w, q, coords):
                coords[w] = q
    return coords


def _bisector_fallback(inst, coords, keep, merge, rational):
    T = inst.T
    v = coords[keep]
    priv = [w for w in T.rot[merge] if w != keep]
    dx = sum(float(coords[w][0]) - float(v[0]) for w in priv)
    dy = sum(float(coords[w][1]) - float(v[1]) for w in priv)
    norm = (dx * dx + dy * dy) ** 0.5
    if norm == 0:
        raise EmptyKernel("no direction for uncontraction", vertex=merge)
    reach = min(((float(coords[w][0]) - float(v[0])) ** 2 + (float(coords[w][1]) - float(v[1])) ** 2) ** 0.5
                for w in T.rot[merge] if w != keep)
    delta = reach / 2
    trial = dict(coords)
    while delta > 1e-300:
        p = (v[0] + convert(dx / norm * delta, rational), v[1] + convert(dy / norm * delta, rational))
        trial[merge] = p
        if _valid_at(inst, merge, p, trial) and _valid_at(inst, keep, trial[keep], trial):
            return p
        delta /= 2
    raise EmptyKernel("uncontraction region is empty at working precision", vertex=merge,
                      hint="retry in rational mode")


def tutte_draw(T: CombinatorialEmbedding, fixed: Mapping[Vertex, Tuple[Number, Number]],
               rational: bool = False) -> StraightLineDrawing:
    """Barycentric drawing with the outer triangle pinned."""
    outer = T.outer_vertices()
    if len(outer) != 3 or set(fixed) != set(outer):
        raise PreconditionFailed("outer face must be the fixed triangle")
    if orient(*(fixed[v] for v in outer)) == 0:
        raise PreconditionFailed("degenerate outer triangle")
    inner = [v for v in T.vertices if v not in fixed]
    idx = {v: i for i, v in enumerate(inner)}
    coords: Coords = {v: tuple(convert(c, rational) for c in fixed[v]) for v in outer}
    n = len(inner)
    if n:
        if rational:
            rows = []
            bx, by = [], []
            for v in inner:
                row = {idx[v]: Fraction(T.degree(v))}
                sx, sy = Fraction(0), Fraction(0)
                for w in T.rot[v]:
                    if w in idx:
                        row[idx[w]] = row.get(idx[w], 0) - 1
                    else:
                        sx += coords[w][0]
                        sy += coords[w][1]
                rows.append(row)
                bx.append(sx)
                by.append(sy)
            xs, _ = solve_rational([dict(r) for r in rows], bx, n)
            ys, _ = solve_rational([dict(r) for r in rows], by, n)
        else:
            r_, c_, v_ = [], [], []
            bx = np.zeros(n)
            by = np.zeros(n)
            for v in inner:
                i = idx[v]
                r_.append(i)
                c_.append(i)
                v_.append(float(T.degree(v)))
                for w in T.rot[v]:
                    if w in idx:
                        r_.append(i)
                        c_.append(idx[w])
                        v_.append(-1.0)
                    else:
                        bx[i] += float(coords[w][0])
                        by[i] += float(coords[w][1])
            M = scipy.sparse.csc_matrix((v_, (r_, c_)), shape=(n, n))
            lu = scipy.sparse.linalg.splu(M)
            xs, ys = lu.solve(bx), lu.solve(by)
            if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
                raise SingularSystem("barycentric system is singular")
            xs, ys = [float(x) for x in xs], [float(y) for y in ys]
        for v in inner:
            coords[v] = (xs[idx[v]], ys[idx[v]])
    return StraightLineDrawing(T, coords)


def _faces_positive(T: CombinatorialEmbedding, coords: Coords, vertices=None) -> bool:
    outer = frozenset(T.outer_vertices())
    check = None if vertices is None else set(vertices)
    for f in T.faces():
        if frozenset(f) == outer:
            continue
        if check is not None and not (set(f) & check):
            continue
        if orient(coords[f[0]], coords[f[1]], coords[f[2]]) <= 0:
            return False
    return True


# ---------------------------------------------------------------------------
# reduction steps


def split_on_separating_triangle(inst: ReductionInstance, tri: Tuple[Vertex, Vertex, Vertex]):
    """Split into the outside part and the inside part of a separating triangle.

    Returns ``(plus, make_minus, block)`` where ``make_minus(coords_plus)``
    builds the inner instance once the outer part is drawn (or returns None
    when the curve avoids the interior, in which case the interior is filled
    in by a barycentric drawing).
    """
    T = inst.T
    x, y, z = tri
    if not (T.has_edge(x, y) and T.has_edge(y, z) and T.has_edge(x, z)):
        raise NotSeparating("not a triangle", triangle=tri)
    facial = {frozenset(f) for f in T.faces()}
    if frozenset(tri) in facial:
        raise NotSeparating("triangle is a face", triangle=tri)
    tset = {x, y, z}
    start = next(v for v in T.outer_vertices() if v not in tset)
    outside = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in T.rot[v]:
            if w not in outside and w not in tset:
                outside.add(w)
                stack.append(w)
    inside = [v for v in T.vertices if v not in outside and v not in tset]
    ins = set(inside)
    plus_rot = {v: [w for w in T.rot[v] if w not in ins] for v in T.vertices if v not in ins}
    plus_T = CombinatorialEmbedding(plus_rot, T.outer)
    minus_rot = {v: [w for w in T.rot[v] if w in ins or w in tset] for v in list(tset) + inside}
    mT = CombinatorialEmbedding(minus_rot)
    mouter = None
    for u, w in ((x, y), (y, x), (y, z), (z, y), (z, x), (x, z)):
        if set(mT.face_of((u, w))) == tset and len(mT.face_of((u, w))) == 3:
            mouter = (u, w)
            break
    minus_T = mT.with_outer(mouter)

    def belongs_inside(it: Item) -> bool:
        if isinstance(it, VertexItem):
            return it.v in ins
        return it.e[0] in ins or it.e[1] in ins

    block = [i for i, it in enumerate(inst.items) if belongs_inside(it)]
    if block and block != list(range(block[0], block[-1] + 1)):
        raise InconsistentSides("curve meets the inside of a separating triangle twice")
    keep = [i for i in range(len(inst.items)) if i not in set(block)]
    plus = ReductionInstance(plus_T, tuple(inst.items[i] for i in keep),
                             tuple(inst.targets[i] for i in keep), tuple(inst.radii[i] for i in keep),
                             inst.eps, inst.delta, {v: inst.sides[v] for v in plus_T.vertices})
    if not block:
        return plus, None, minus_T, block

    i0, j0 = block[0], block[-1]

    def make_minus(coords_plus: Coords, rational: bool) -> ReductionInstance:
        before, after = inst.items[i0 - 1], inst.items[j0 + 1]
        vals = []
        for it in (before, after):
            if isinstance(it, VertexItem):
                vals.append(coords_plus[it.v][1])
            else:
                yy = line_intercept(coords_plus[it.e[0]], coords_plus[it.e[1]])
                vals.append(convert(yy, rational))
        items = (before,) + tuple(inst.items[i0:j0 + 1]) + (after,)
        targets = (vals[0],) + tuple(inst.targets[i0:j0 + 1]) + (vals[1],)
        zero = convert(0, rational)
        radii = (zero,) + tuple(inst.radii[i0:j0 + 1]) + (zero,)
        delta = {v: coords_plus[v] for v in tset}
        return ReductionInstance(minus_T, items, targets, radii, inst.eps, delta,
                                 {v: inst.sides[v] for v in minus_T.vertices})

    return plus, make_minus, minus_T, block


def contract(inst: ReductionInstance, keep: Vertex, merge: Vertex, halve: bool = False) -> ReductionInstance:
    T2 = inst.T.contract_edge(keep, merge)
    items = []
    for it in inst.items:
        if isinstance(it, EdgeItem) and merge in it.e:
            other = it.e[0] if it.e[1] == merge else it.e[1]
            items.append(EdgeItem(ekey(keep, other)))
        else:
            items.append(it)
    radii = tuple(r / 2 for r in inst.radii) if halve else inst.radii
    eps = inst.eps / 2 if halve else inst.eps
    sides = {v: s for v, s in inst.sides.items() if v != merge}
    return ReductionInstance(T2, tuple(items), inst.targets, radii, eps, inst.delta, sides)


def _insert_item(inst: ReductionInstance, T2, after: int, item: Item, lo: Number, hi: Number,
                 lo_r: Number, hi_r: Number) -> ReductionInstance:
    """New edge item between positions ``after`` and ``after+1`` with a window
    in the free space between its neighbours' windows."""
    free_lo, free_hi = lo + lo_r, hi - hi_r
    mid = (lo + hi) / 2
    rad = min(mid - free_lo, free_hi - mid) / 2
    if rad <= 0:
        mid = (free_lo + free_hi) / 2
        rad = (free_hi - free_lo) / 4
    items = inst.items[:after + 1] + (item,) + inst.items[after + 1:]
    targets = inst.targets[:after + 1] + (mid,) + inst.targets[after + 1:]
    radii = inst.radii[:after + 1] + (rad,) + inst.radii[after + 1:]
    return ReductionInstance(T2, items, targets, radii, inst.eps, inst.delta, inst.sides)


def apply_flip(inst: ReductionInstance, match: FlipMatch):
    """Replace xy by zb; the new item sits between xb and yb."""
    x, y, z, b = match.x, match.y, match.z, match.b
    T2, (p, q) = inst.T.flip(x, y)
    if {p, q} != {z, b}:
        raise PreconditionFailed("flip produced an unexpected diagonal")
    pos = _positions(inst)
    i, j = pos[ekey(x, b)], pos[ekey(y, b)]
    lo, hi = min(i, j), max(i, j)
    if hi != lo + 1:
        raise PreconditionFailed("xb and yb are not consecutive crossings")
    child = _insert_item(inst, T2, lo, EdgeItem(ekey(z, b)), inst.targets[lo], inst.targets[hi],
                         inst.radii[lo], inst.radii[hi])
    undo = {"removed": ekey(x, y), "added": ekey(z, b), "x": x, "y": y, "z": z, "b": b}
    return child, undo


def replace_edge_on_curve(inst: ReductionInstance, xy: Tuple[Vertex, Vertex]):
    x, y = xy
    T = inst.T
    z = T.ccw_before(y, x)
    b = T.ccw_before(x, y)
    if inst.sides[z] * inst.sides[b] != -1:
        raise InconsistentSides("faces at an on-curve edge are not on opposite sides", edge=xy)
    T2, _ = T.flip(x, y)
    idx = inst.item_index()
    i, j = sorted((idx[x], idx[y]))
    if j != i + 1:
        raise InconsistentSides("on-curve edge joins non-consecutive items", edge=xy)
    child = _insert_item(inst, T2, i, EdgeItem(ekey(z, b)), inst.targets[i], inst.targets[j],
                         inst.radii[i], inst.radii[j])
    undo = {"removed": ekey(x, y), "added": ekey(z, b), "x": x, "y": y, "z": z, "b": b}
    return child, undo


# ---------------------------------------------------------------------------
# base cases


def _small_case(inst: ReductionInstance, rational: bool) -> Coords:
    coords: Coords = {v: tuple(convert(c, rational) for c in p) for v, p in inst.delta.items()}
    rest = [v for v in inst.T.vertices if v not in coords]
    idx = inst.item_index()
    for v in rest:
        if inst.sides[v] == Side.Y:
            coords[v] = (convert(0, rational), inst.targets[idx[v]])
        else:
            p = _place(inst, v, coords, rational)
            if p is None:
                raise EmptyKernel("no feasible position for the inner vertex", vertex=v)
            coords[v] = p
    return coords


def base_case_solve(inst: ReductionInstance, rational: bool = False, tol: Tolerances = Tolerances(),
                    node: Optional[TraceNode] = None) -> Coords:
    """Drop unmarked edges, draw the A-graph that remains, put the edges back."""
    T = inst.T
    ec = classify_edges(inst)
    unmarked = [e for e, c in ec.classes.items() if c == "unmarked"]
    G = T
    for u, v in unmarked:
        G = G.remove_edge(u, v)
    outer_T = T.outer_vertices()
    og = G.outer_face()
    sides = dict(inst.sides)
    idx = inst.item_index()
    edge_y: Dict[Edge, Number] = {}
    for e in G.edges():
        u, v = e
        if sides[u] == Side.Y:
            edge_y[e] = inst.targets[idx[u]]
        elif sides[v] == Side.Y:
            edge_y[e] = inst.targets[idx[v]]
        else:
            edge_y[e] = inst.targets[idx[("e",) + e]]
    try:
        a = build_agraph(G, sides, edge_y)
    except (NotAGraph, TargetsNotIncreasing) as exc:
        raise BaseCaseNotAGraph("graph left after removing unmarked edges is not an A-graph",
                                reason=exc.message) from None
    delta = dict(inst.delta)
    if len(og) == 4:
        x = next(v for v in og if v not in outer_T)
        if sides[x] == Side.Y:
            delta[x] = (convert(0, rational), inst.targets[idx[x]])
        else:
            k = og.index(x)
            al, be = og[k - 1], og[(k + 1) % 4]
            delta[x] = _cevian_point(delta[al], edge_y[ekey(al, x)], delta[be], edge_y[ekey(be, x)], rational)
        delta = {v: delta[v] for v in og}
    targets = [edge_y[e] for e in a.edge_order]
    info: list = []
    d = draw_a_graph(a, targets, delta, rational=rational, tol=tol, info=info, verify=False)
    coords = dict(d.coords)
    for v in outer_T:
        coords[v] = inst.delta[v]
    if node is not None:
        node.data.update({"agraph_m": a.m, "agraph_n": a.n, "removed": [list(e) for e in unmarked],
                          "strategy": info[-1].strategy if info else None})
    return coords


def _cevian_point(pa, ya, pb, yb, rational):
    """Intersection of the line through pa and (0, ya) with the line through pb and (0, yb)."""
    ax, ay = map(to_fraction, pa)
    bx, by = map(to_fraction, pb)
    ya, yb = to_fraction(ya), to_fraction(yb)
    sa = (ya - ay) / (0 - ax)
    sb = (yb - by) / (0 - bx)
    if sa == sb:
        raise IncompatibleOuterShape("cevians are parallel")
    x = (yb - ya) / (sa - sb)
    y = ya + sa * x
    return (convert(x, rational), convert(y, rational))


# ---------------------------------------------------------------------------
# driver


@dataclass
class ReductionResult:
    drawing: StraightLineDrawing
    trace: TraceNode


def _outer_edge_on_curve(inst: ReductionInstance) -> bool:
    return any(inst.sides[u] == Side.Y and inst.sides[v] == Side.Y for u, v in _cycle_edges(inst.T.outer_vertices()))


def _measure(inst: ReductionInstance) -> Tuple[int, int]:
    s = inst.sides
    return (inst.T.n(), sum(1 for u, v in inst.T.edges() if s[u] * s[v] != -1))


def _solve(inst: ReductionInstance, rational: bool, tol: Tolerances, halve: bool) -> Tuple[Coords, TraceNode]:
    """Apply contractions, flips and on-curve replacements iteratively; recurse
    only on splits."""
    chain: List[Tuple[str, dict, ReductionInstance]] = []
    nodes: List[TraceNode] = []
    cur = inst
    while True:
        T = cur.T
        n = T.n()
        if n == 3:
            node = TraceNode("Trivial", {"edges": [list(e) for e in T.edges()]})
            coords = {v: tuple(convert(c, rational) for c in p) for v, p in cur.delta.items()}
            break
        if not cur.items or _outer_edge_on_curve(cur):
            node = TraceNode("Tutte", {"edges": [list(e) for e in T.edges()]})
            coords = dict(tutte_draw(T, cur.delta, rational).coords)
            break
        if n == 4:
            node = TraceNode("Small", {"edges": [list(e) for e in T.edges()]})
            coords = _small_case(cur, rational)
            break
        sep = find_separating_triangle(T)
        if sep is not None:
            node = TraceNode("Split", {"triangle": list(sep)})
            coords = _do_split(cur, sep, rational, tol, halve, node)
            break
        ec = classify_edges(cur)
        before = _measure(cur)
        ce = find_contractible_edge(cur, ec)
        if ce is not None:
            keep, merge = ce
            step = {"keep": keep, "merge": merge,
                    "keep_nbrs": [w for w in T.rot[keep] if w != merge],
                    "merge_nbrs": [w for w in T.rot[merge] if w != keep],
                    "eps": cur.eps}
            child = contract(cur, keep, merge, halve)
            chain.append(("Contract", step, cur))
        else:
            fm = find_flippable_edge(cur, ec)
            if fm is not None:
                child, step = apply_flip(cur, fm)
                step["case"] = fm.case
                chain.append(("Flip", step, cur))
            else:
                oc = find_edge_on_curve(cur)
                if oc is None:
                    node = TraceNode("Base", {"edges": [list(e) for e in T.edges()]})
                    coords = base_case_solve(cur, rational, tol, node)
                    break
                child, step = replace_edge_on_curve(cur, oc)
                chain.append(("OnCurve", step, cur))
        after = _measure(child)
        if not after < before:
            raise PreconditionFailed("reduction measure did not decrease", before=before, after=after)
        cur = child
    # unwind
    for kind, step, parent in reversed(chain):
        node = TraceNode(kind, step, [node])
        if kind == "Contract":
            coords = uncontract_placement(parent, coords, step["keep"], step["merge"], rational)
        else:
            x, y, z, b = step["x"], step["y"], step["z"], step["b"]
            if not (_faces_positive(parent.T, coords, [x, y])):
                raise PreconditionFailed("edge swap would create a crossing", kind=kind)
    return coords, node


def _do_split(inst, sep, rational, tol, halve, node: TraceNode) -> Coords:
    plus, make_minus, minus_T, block = split_on_separating_triangle(inst, sep)
    if halve and block:
        plus = ReductionInstance(plus.T, plus.items, plus.targets, tuple(r / 2 for r in plus.radii),
                                 plus.eps / 2, plus.delta, plus.sides)
    cp, np_ = _solve(plus, rational, tol, halve)
    node.children.append(np_)
    node.data["block"] = [block[0], block[-1]] if block else []
    coords = dict(cp)
    if make_minus is None:
        d = tutte_draw(minus_T, {v: cp[v] for v in sep}, rational)
        coords.update(d.coords)
        node.data["inner_edges"] = [list(e) for e in minus_T.edges()]
        node.children.append(TraceNode("Tutte", {"edges": [list(e) for e in minus_T.edges()]}))
        return coords
    minus = make_minus(cp, rational)
    cm, nm = _solve(minus, rational, tol, halve)
    node.children.append(nm)
    for v, p in cm.items():
        if v not in sep:
            coords[v] = p
    return coords


def draw_triangulation(inst: ReductionInstance, rational: bool = False, tol: Tolerances = Tolerances(),
                       eps_policy: str = "window", verify: bool = True) -> ReductionResult:
    """Draw the instance; vertex items exactly on target, edge items in their windows."""
    check_instance(inst)
    coords, trace = _solve(inst, rational, tol, eps_policy == "halve")
    d = StraightLineDrawing(inst.T, coords)
    if verify:
        rep = is_plane(d)
        if not rep.plane:
            raise PreconditionFailed("reassembled drawing has crossings", pairs=rep.pairs[:3])
    return ReductionResult(d, trace)
