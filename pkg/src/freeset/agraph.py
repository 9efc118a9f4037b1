"""A-graphs and their slope systems.

An A-graph is a plane straight-line graph in which every edge meets the axis
x = 0 exactly once, every face is either a triangle with one vertex in each of
L, Y, R or a non-convex quadrilateral, and every axis vertex sees a triangle
directly above and directly below itself.

Given crossing targets y_1 <= ... <= y_m (ties exactly at axis vertices) and a
compatible outer shape, the unknown edge slopes solve a square linear system
made of concurrency rows (off-axis vertices), proportionality rows (axis
vertices) and four boundary rows.  Its unique solution determines the drawing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .drawing import Side, StraightLineDrawing, check_devillers, edge_intercepts, is_plane, side_of
from .embedding import CombinatorialEmbedding, Edge, Vertex, ekey
from .errors import (
    ContinuationStalled,
    CountMismatch,
    CyclicPrecedence,
    DegenerateBundle,
    FreeSetError,
    IncompatibleOuterShape,
    InconsistentConcurrency,
    MissingWitness,
    NotAGraph,
    PreconditionFailed,
    SingularSystem,
    SolverInitializationFailed,
    TargetsNotIncreasing,
)
from .exact import Number, convert, orient, to_fraction
from .linalg import solve_float, solve_rational


class OuterCase(str, Enum):
    TRIANGLE_BOTTOM = "TriangleBottom"
    TRIANGLE_TOP = "TriangleTop"
    QUAD = "Quad"


@dataclass(frozen=True)
class Tolerances:
    rtol: float = 1e-9          # residual, relative to the backward-error scale
    ctol: float = 1e-7          # concurrency consistency, relative to bbox
    pivot: float = 1e-12        # pivot threshold relative to the infinity norm
    target_rtol: float = 1e-6   # reported crossing accuracy in float mode

    def updated(self, **kw) -> "Tolerances":
        vals = {**self.__dict__, **{k: float(v) for k, v in kw.items()}}
        return Tolerances(**vals)


# ---------------------------------------------------------------------------
# the A-graph structure


@dataclass(frozen=True, eq=False)
class AGraph:
    embedding: CombinatorialEmbedding
    sides: Mapping[Vertex, Side]
    edge_order: Tuple[Edge, ...]
    outer_case: OuterCase
    face_kinds: Mapping[Tuple[Vertex, ...], str]
    groups: Mapping[Vertex, Tuple[int, ...]]
    witness: Optional[StraightLineDrawing] = None
    _pos: Dict[Edge, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {e: i for i, e in enumerate(self.edge_order)})

    @property
    def m(self) -> int:
        return len(self.edge_order)

    @property
    def n(self) -> int:
        return self.embedding.n()

    @property
    def n0(self) -> int:
        return sum(1 for s in self.sides.values() if s == Side.Y)

    @property
    def f3(self) -> int:
        return sum(1 for k in self.face_kinds.values() if k == "triangle")

    @property
    def f4(self) -> int:
        return sum(1 for k in self.face_kinds.values() if k == "quad")

    def position(self, e: Edge) -> int:
        return self._pos[ekey(*e)]

    def y_vertices(self) -> List[Vertex]:
        return [v for v in self.embedding.vertices if self.sides[v] == Side.Y]

    def incident_positions(self, v: Vertex) -> List[int]:
        return sorted(self.position((v, w)) for w in self.embedding.rot[v])

    def bundles(self, v: Vertex) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Left bundle a_1..a_k and right bundle b_1..b_l (positions, bottom to top)."""
        emb = self.embedding
        ns = emb.rot[v]
        start = _transition(ns, self.sides, Side.L, Side.R)
        seq = [ns[(start + i) % len(ns)] for i in range(len(ns))]
        right = [w for w in seq if self.sides[w] == Side.R]
        left = [w for w in seq if self.sides[w] == Side.L][::-1]
        return (tuple(self.position((v, w)) for w in left),
                tuple(self.position((v, w)) for w in right))

    def outer_edges(self) -> List[int]:
        f = self.embedding.outer_face()
        k = len(f)
        return sorted(self.position((f[i], f[(i + 1) % k])) for i in range(k))

    def gamma(self) -> Optional[Vertex]:
        if self.outer_case == OuterCase.QUAD:
            return None
        f = self.embedding.outer_face()
        return next(v for v in f if self.sides[v] == Side.Y)

    def equation_budget(self) -> int:
        return 2 * self.m - 2 * self.n - self.n0


def _transition(ns: Sequence[Vertex], sides: Mapping[Vertex, Side], a: Side, b: Side) -> int:
    """Index i with sides[ns[i-1]] == a and sides[ns[i]] == b (unique for A-graphs)."""
    hits = [i for i in range(len(ns)) if sides[ns[i - 1]] == a and sides[ns[i]] == b]
    if len(hits) != 1:
        raise NotAGraph("axis vertex neighbours are not split into a left and a right arc",
                        property=5)
    return hits[0]


def build_agraph(emb: CombinatorialEmbedding, sides: Mapping[Vertex, Side],
                 edge_y: Mapping[Edge, Number], witness: Optional[StraightLineDrawing] = None) -> AGraph:
    """Classify a combinatorial A-graph given each edge's crossing coordinate.

    Properties 1, 2, 4 and 5 are checked combinatorially; property 3
    (non-convex quadrilaterals) needs coordinates and is checked by
    ``validate_a_graph``.  Ties at an axis vertex are ordered counter-clockwise
    starting from the downward direction, except at the topmost outer axis
    vertex where the sweep starts upward, so that e_1 and e_m are outer edges.
    """
    if emb.n() < 3:
        raise NotAGraph("fewer than three vertices", property=2)
    if emb.components() != 1:
        raise NotAGraph("graph is disconnected", property=2)
    if emb.outer is None:
        raise NotAGraph("no outer face designated", property=2)
    for u, v in emb.edges():
        su, sv = sides[u], sides[v]
        if (su == Side.Y and sv == Side.Y) or (su == sv):
            raise NotAGraph("edge does not meet the axis exactly once", property=1, edge=(u, v))
    kinds: Dict[Tuple[Vertex, ...], str] = {}
    tri_at: Dict[Vertex, int] = {v: 0 for v in emb.vertices}
    for f in emb.faces():
        if len(set(f)) != len(f) or len(f) not in (3, 4):
            raise NotAGraph("face is neither a triangle nor a quadrilateral", property=2, face=f)
        if len(f) == 3:
            if sorted(int(sides[w]) for w in f) != [-1, 0, 1]:
                raise NotAGraph("triangle without one vertex per region", property=4, face=f)
            kinds[f] = "triangle"
            for w in f:
                tri_at[w] += 1
        else:
            kinds[f] = "quad"
    yv = [v for v in emb.vertices if sides[v] == Side.Y]
    for v in yv:
        ns = emb.rot[v]
        i = _transition(ns, sides, Side.L, Side.R)
        j = _transition(ns, sides, Side.R, Side.L)
        below = emb.face_of((v, ns[i - 1]))
        above = emb.face_of((v, ns[j - 1]))
        if len(below) != 3 or len(above) != 3 or tri_at[v] != 2:
            raise NotAGraph("axis vertex not flanked by exactly two triangles", property=5, vertex=v)
    for v in emb.vertices:
        if emb.degree(v) < 2:
            raise NotAGraph("vertex of degree below 2", property=7, vertex=v)

    # crossing values: axis-vertex edges share the vertex value
    ys: Dict[Edge, Number] = {}
    for e in emb.edges():
        if ekey(*e) not in edge_y and e not in edge_y:
            raise NotAGraph("missing crossing value", edge=e)
        ys[e] = edge_y[e]
    vy: Dict[Vertex, Number] = {}
    for v in yv:
        vals = {ys[ekey(v, w)] for w in emb.rot[v]}
        if len(vals) != 1:
            raise TargetsNotIncreasing("edges at an axis vertex disagree", vertex=v)
        vy[v] = vals.pop()

    outer = emb.outer_face()
    if len(outer) == 3:
        gamma = next(v for v in outer if sides[v] == Side.Y)
        others = [ys[e] for e in emb.edges() if gamma not in e]
        if all(y > vy[gamma] for y in others):
            case = OuterCase.TRIANGLE_BOTTOM
        elif all(y < vy[gamma] for y in others):
            case = OuterCase.TRIANGLE_TOP
        else:
            raise NotAGraph("outer axis vertex is not extreme", property=5, vertex=gamma)
    else:
        case, gamma = OuterCase.QUAD, None

    def group_order(v: Vertex) -> List[Edge]:
        ns = emb.rot[v]
        if v == gamma and case == OuterCase.TRIANGLE_TOP:
            start = _transition(ns, sides, Side.R, Side.L)
        else:
            start = _transition(ns, sides, Side.L, Side.R)
        return [ekey(v, ns[(start + i) % len(ns)]) for i in range(len(ns))]

    keyed = []
    placed = set()
    for v in sorted(yv, key=lambda w: vy[w]):
        for r, e in enumerate(group_order(v)):
            keyed.append((vy[v], r, e))
            placed.add(e)
    for e in emb.edges():
        if e not in placed:
            keyed.append((ys[e], 0, e))
    keyed.sort(key=lambda t: (t[0], t[1]))
    order = tuple(t[2] for t in keyed)
    for a, b in zip(keyed, keyed[1:]):
        same_vertex = any(sides[w] == Side.Y and w in b[2] for w in a[2])
        if a[0] == b[0] and not same_vertex:
            raise TargetsNotIncreasing("distinct crossings share a coordinate", edges=[a[2], b[2]])
        if a[0] > b[0]:
            raise TargetsNotIncreasing("targets out of order")
    outer_set = {ekey(outer[i], outer[(i + 1) % len(outer)]) for i in range(len(outer))}
    if order[0] not in outer_set or order[-1] not in outer_set:
        raise NotAGraph("extreme crossings are not outer edges", property=2)
    pos = {e: i for i, e in enumerate(order)}
    groups = {v: tuple(sorted(pos[ekey(v, w)] for w in emb.rot[v])) for v in yv}
    return AGraph(emb, dict(sides), order, case, kinds, groups, witness)


def validate_a_graph(d: StraightLineDrawing) -> AGraph:
    """Check a drawing against the A-graph definition and classify it."""
    rep = is_plane(d)
    if not rep.plane:
        raise NotAGraph("drawing is not plane", property="plane", pairs=rep.pairs[:3])
    if not check_devillers(d, d.embedding):
        raise NotAGraph("rotation system disagrees with coordinates", property="embedding")
    sides = d.sides()
    for u, v in d.embedding.edges():
        if sides[u] == sides[v]:
            raise NotAGraph("edge does not meet the axis exactly once", property=1, edge=(u, v))
    inter = edge_intercepts(d)
    a = build_agraph(d.embedding, sides, inter, witness=d)
    for f, kind in a.face_kinds.items():
        if kind != "quad":
            continue
        signs = [orient(d.coords[f[i - 1]], d.coords[f[i]], d.coords[f[(i + 1) % 4]]) for i in range(4)]
        if 0 in signs or len(set(signs)) == 1:
            raise NotAGraph("quadrilateral face is convex", property=3, face=f)
    return a


# ---------------------------------------------------------------------------
# precedence and coefficients


@dataclass(frozen=True)
class PrecedenceRelation:
    """Pairs (i, j) of edge positions meaning e_i must have smaller slope than e_j."""

    pairs: Tuple[Tuple[int, int, Vertex, Side], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def default_eps(self, y: Sequence[Number]) -> Number:
        if not self.pairs:
            return 0
        return min(abs(y[j] - y[i]) for i, j, _, _ in self.pairs)


def precedence_relation(a: AGraph) -> PrecedenceRelation:
    pairs = []
    for v in a.embedding.vertices:
        s = a.sides[v]
        if s == Side.Y:
            continue
        ps = a.incident_positions(v)
        for x in range(len(ps)):
            for z in range(x + 1, len(ps)):
                lo, hi = ps[x], ps[z]
                pairs.append((lo, hi, v, s) if s == Side.L else (hi, lo, v, s))
    pairs.sort(key=lambda p: (p[0], p[1]))
    ts = TopologicalSorter()
    for i, j, _, _ in pairs:
        ts.add(j, i)
    try:
        ts.prepare()
    except CycleError as exc:
        raise CyclicPrecedence("precedence relation has a cycle", cycle=exc.args[1]) from None
    return PrecedenceRelation(tuple(pairs))


@dataclass(frozen=True)
class ProportionalityCoefficients:
    """Per axis vertex: right fractions lambda_2..lambda_{l-1}, left fractions, and mu."""

    right: Mapping[Vertex, Tuple[Number, ...]]
    left: Mapping[Vertex, Tuple[Number, ...]]
    mu: Mapping[Vertex, Number]

    def convert(self, rational: bool) -> "ProportionalityCoefficients":
        c = lambda t: tuple(convert(x, rational) for x in t)  # noqa: E731
        return ProportionalityCoefficients(
            {v: c(t) for v, t in self.right.items()},
            {v: c(t) for v, t in self.left.items()},
            {v: convert(x, rational) for v, x in self.mu.items()},
        )

    def interpolate(self, other: "ProportionalityCoefficients", t: Number) -> "ProportionalityCoefficients":
        lin = lambda p, q: (1 - t) * p + t * q  # noqa: E731
        return ProportionalityCoefficients(
            {v: tuple(lin(p, q) for p, q in zip(self.right[v], other.right[v])) for v in self.right},
            {v: tuple(lin(p, q) for p, q in zip(self.left[v], other.left[v])) for v in self.left},
            {v: lin(self.mu[v], other.mu[v]) for v in self.mu},
        )


def _witness_slopes(a: AGraph) -> List[Fraction]:
    if a.witness is None:
        raise MissingWitness("A-graph carries no witness drawing")
    c = a.witness.coords
    out = []
    for u, v in a.edge_order:
        (x0, y0), (x1, y1) = c[u], c[v]
        out.append((to_fraction(y1) - to_fraction(y0)) / (to_fraction(x1) - to_fraction(x0)))
    return out


def derive_coefficients_from_witness(a: AGraph) -> ProportionalityCoefficients:
    s = _witness_slopes(a)
    right, left, mu = {}, {}, {}
    for v in a.y_vertices():
        A, B = a.bundles(v)
        if len(B) >= 2:
            rng = s[B[-1]] - s[B[0]]
            if rng == 0:
                raise DegenerateBundle("right bundle has zero slope range", vertex=v)
            right[v] = tuple((s[B[i]] - s[B[0]]) / rng for i in range(1, len(B) - 1))
        else:
            right[v] = ()
        if len(A) >= 2:
            rng = s[A[-1]] - s[A[0]]
            if rng == 0:
                raise DegenerateBundle("left bundle has zero slope range", vertex=v)
            left[v] = tuple((s[A[i]] - s[A[0]]) / rng for i in range(1, len(A) - 1))
        if len(A) >= 2 and len(B) >= 2:
            mu[v] = (s[A[0]] - s[A[-1]]) / (s[B[-1]] - s[B[0]])
        left.setdefault(v, ())
    return ProportionalityCoefficients(right, left, mu)


def default_coefficients(a: AGraph) -> ProportionalityCoefficients:
    right, left, mu = {}, {}, {}
    for v in a.y_vertices():
        A, B = a.bundles(v)
        right[v] = tuple(Fraction(i, len(B) - 1) for i in range(1, len(B) - 1))
        left[v] = tuple(Fraction(i, len(A) - 1) for i in range(1, len(A) - 1))
        if len(A) >= 2 and len(B) >= 2:
            mu[v] = Fraction(1)
    return ProportionalityCoefficients(right, left, mu)


def random_coefficients(a: AGraph, rng: np.random.Generator) -> ProportionalityCoefficients:
    right, left, mu = {}, {}, {}
    for v in a.y_vertices():
        A, B = a.bundles(v)
        right[v] = tuple(Fraction(x) for x in np.sort(rng.uniform(0.02, 0.98, len(B) - 2))) if len(B) > 2 else ()
        left[v] = tuple(Fraction(x) for x in np.sort(rng.uniform(0.02, 0.98, len(A) - 2))) if len(A) > 2 else ()
        if len(A) >= 2 and len(B) >= 2:
            mu[v] = Fraction(float(np.exp(rng.uniform(math.log(1 / 8), math.log(8)))))
    return ProportionalityCoefficients(right, left, mu)


# ---------------------------------------------------------------------------
# boundary data


@dataclass(frozen=True)
class BoundarySpec:
    """Prescribed outer shape (vertex -> point), its case and the extra edge e_b."""

    delta: Mapping[Vertex, Tuple[Number, Number]]
    case: OuterCase
    e_b: Optional[int] = None


def boundary_spec(a: AGraph, delta: Mapping[Vertex, Tuple[Number, Number]]) -> BoundarySpec:
    e_b = None
    if a.outer_case != OuterCase.QUAD:
        g = a.gamma()
        outer = set(a.outer_edges())
        e_b = next((i for i in _group_sequence(a, g) if i not in outer), None)
    return BoundarySpec(dict(delta), a.outer_case, e_b)


def _group_sequence(a: AGraph, v: Vertex) -> List[int]:
    return list(a.groups[v])


def check_compatible(a: AGraph, spec: BoundarySpec, y: Sequence[Number], rational: bool = False,
                     rtol: float = 1e-9) -> None:
    """Raise IncompatibleOuterShape unless the outer shape agrees with the targets."""
    f = a.embedding.outer_face()
    if set(spec.delta) != set(f):
        raise IncompatibleOuterShape("outer shape vertices differ from the outer face")
    scale = max([1.0] + [abs(float(c)) for p in spec.delta.values() for c in p])

    def close(p: Number, q: Number) -> bool:
        if rational:
            return to_fraction(p) == to_fraction(q)
        return abs(float(p) - float(q)) <= rtol * scale

    pts = [spec.delta[v] for v in f]
    from .exact import signed_area2

    if signed_area2(pts) >= 0:
        raise IncompatibleOuterShape("outer shape has the wrong orientation")
    for v in f:
        x, yy = spec.delta[v]
        if side_of(x) != a.sides[v]:
            raise IncompatibleOuterShape("outer vertex on the wrong side", vertex=v)
        if a.sides[v] == Side.Y:
            i = a.groups[v][0]
            if not close(yy, y[i]):
                raise IncompatibleOuterShape("axis vertex of the outer shape off target", vertex=v)
    for i in a.outer_edges():
        u, w = a.edge_order[i]
        if a.sides[u] == Side.Y or a.sides[w] == Side.Y:
            continue
        from .exact import line_intercept

        yi = line_intercept(spec.delta[u], spec.delta[w])
        if not close(yi, y[i]):
            raise IncompatibleOuterShape("outer edge crosses the axis off target", edge=(u, w))
    if spec.case != OuterCase.QUAD:
        if spec.case == OuterCase.TRIANGLE_BOTTOM and a.groups[a.gamma()][0] != 0:
            raise IncompatibleOuterShape("bottom outer vertex is not the lowest crossing")
        if spec.case == OuterCase.TRIANGLE_TOP and a.groups[a.gamma()][-1] != a.m - 1:
            raise IncompatibleOuterShape("top outer vertex is not the highest crossing")


def outer_shape_for_targets(a: AGraph, targets, rational: bool = False) -> Dict[Vertex, Tuple[Number, Number]]:
    """An outer shape compatible with ``targets``, modelled on the witness.

    Triangle case: the axis vertex sits at its target and the opposite edge is
    moved parallel to its witness position so that it crosses at its target.
    Quad case: with r the reflex corner, o the opposite corner and p, q the
    other two (p lower), p and q go to x = -1, o to x = 1 and r strictly
    between; heights follow from the four crossing targets.  Mirrored when r
    lies left of the axis.
    """
    if a.witness is None:
        raise MissingWitness("the outer shape is modelled on the witness")
    y = [to_fraction(v) for v in _targets_list(a, targets)]
    f = a.embedding.outer_face()
    wc = a.witness.coords
    t = {ekey(f[i], f[(i + 1) % len(f)]): y[a.position((f[i], f[(i + 1) % len(f)]))] for i in range(len(f))}
    out: Dict[Vertex, Tuple[Fraction, Fraction]] = {}
    if len(f) == 3:
        g = next(v for v in f if a.sides[v] == Side.Y)
        l, r = (v for v in f if v != g)
        (xl, yl), (xr, yr) = (tuple(map(to_fraction, wc[v])) for v in (l, r))
        k = (yr - yl) / (xr - xl)
        h = t[ekey(l, r)]
        out = {g: (Fraction(0), y[a.groups[g][0]]), l: (xl, h + k * xl), r: (xr, h + k * xr)}
    else:
        pts = [wc[v] for v in f]
        i = next(i for i in range(4) if orient(pts[i - 1], pts[i], pts[(i + 1) % 4]) > 0)
        # the outer cycle runs clockwise, so its reflex corner turns left
        rv, ov = f[i], f[(i + 2) % 4]
        p, q = f[i - 1], f[(i + 1) % 4]
        if t[ekey(ov, p)] > t[ekey(ov, q)]:
            p, q = q, p
        t_op, t_oq, t_rp, t_rq = t[ekey(ov, p)], t[ekey(ov, q)], t[ekey(rv, p)], t[ekey(rv, q)]
        d_o, d_r = t_oq - t_op, t_rq - t_rp
        if not (t_op < t_rp < t_rq < t_oq):
            raise IncompatibleOuterShape("outer crossing targets out of order for the quad")
        gap = 2 * d_o
        yp = (t_op + t_oq) / 2 - d_o
        yq = yp + gap
        s = 1 if a.sides[rv] == Side.R else -1
        xo, xr = Fraction(1), d_r / (gap - d_r)
        out = {p: (Fraction(-s), yp), q: (Fraction(-s), yq),
               ov: (s * xo, t_op + (t_op - yp) * xo), rv: (s * xr, t_rp + (t_rp - yp) * xr)}
    return {v: (convert(P[0], rational), convert(P[1], rational)) for v, P in out.items()}


def boundary_equations(a: AGraph, spec: BoundarySpec, rational: bool = False) -> List[Tuple[int, Number]]:
    """Four (edge position, slope) pairs.

    Outer edges take the slopes of the prescribed shape.  In the triangle
    cases the extra edge e_b at the outer axis vertex gets a slope one unit
    beyond the outer slopes, on the side its position in the bundle forces.
    """
    rows: List[Tuple[int, Number]] = []
    d = spec.delta
    for i in a.outer_edges():
        u, w = a.edge_order[i]
        (x0, y0), (x1, y1) = d[u], d[w]
        dx = convert(x1, rational) - convert(x0, rational)
        if dx == 0:
            raise IncompatibleOuterShape("vertical outer edge", edge=(u, w))
        rows.append((i, (convert(y1, rational) - convert(y0, rational)) / dx))
    if spec.case != OuterCase.QUAD:
        hs = [h for _, h in rows]
        g = a.gamma()
        u, w = a.edge_order[spec.e_b]
        other = w if u == g else u
        in_right = a.sides[other] == Side.R
        bottom = spec.case == OuterCase.TRIANGLE_BOTTOM
        if in_right == bottom:
            hb = max(hs) + 1
        else:
            hb = min(hs) - 1
        rows.append((spec.e_b, hb))
        rows.sort()
    if len(rows) != 4:
        raise CountMismatch("boundary rows", rows=len(rows))
    return rows


# ---------------------------------------------------------------------------
# the linear system


@dataclass(frozen=True)
class SlopeSystem:
    rows: Tuple[Dict[int, Number], ...]
    rhs: Tuple[Number, ...]
    tags: Tuple[tuple, ...]
    m: int
    rational: bool = False

    def counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for t in self.tags:
            out[t[0]] = out.get(t[0], 0) + 1
        return out

    def dense(self) -> Tuple[np.ndarray, np.ndarray]:
        A = np.zeros((self.m, self.m))
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                A[r, c] = float(v)
        return A, np.array([float(v) for v in self.rhs])


def assemble_system(a: AGraph, coeffs: ProportionalityCoefficients, y: Sequence[Number],
                    boundary: Sequence[Tuple[int, Number]], rational: bool = False) -> SlopeSystem:
    y = [convert(v, rational) for v in y]
    cf = coeffs.convert(rational)
    one = convert(1, rational)
    rows: List[Dict[int, Number]] = []
    rhs: List[Number] = []
    tags: List[tuple] = []
    for v in a.embedding.vertices:
        s = a.sides[v]
        if s == Side.Y:
            A, B = a.bundles(v)
            for bundle, lam, name in ((B, cf.right[v], "lambda"), (A, cf.left[v], "kappa")):
                for idx in range(1, len(bundle) - 1):
                    lm = lam[idx - 1]
                    row: Dict[int, Number] = {}
                    _acc(row, bundle[0], one - lm)
                    _acc(row, bundle[-1], lm)
                    _acc(row, bundle[idx], -one)
                    rows.append(row)
                    rhs.append(0 * one)
                    tags.append((name, v, idx))
            if v in cf.mu:
                mu = cf.mu[v]
                row = {}
                _acc(row, A[0], one)
                _acc(row, A[-1], -one)
                _acc(row, B[-1], -mu)
                _acc(row, B[0], mu)
                rows.append(row)
                rhs.append(0 * one)
                tags.append(("mu", v))
            continue
        ps = a.incident_positions(v)
        if s == Side.R:
            ps = ps[::-1]
        i, j = ps[0], ps[1]
        for k in ps[2:]:
            row = {}
            _acc(row, i, y[j] - y[k])
            _acc(row, j, y[k] - y[i])
            _acc(row, k, y[i] - y[j])
            rows.append(row)
            rhs.append(0 * one)
            tags.append(("concurrency", v, i, j, k))
    interior = len(rows)
    if interior != a.m - 4:
        raise CountMismatch("non-boundary row count differs from m - 4", rows=interior, m=a.m)
    for i, h in boundary:
        rows.append({i: one})
        rhs.append(convert(h, rational))
        tags.append(("boundary", i))
    if len(rows) != a.m:
        raise CountMismatch("row count differs from m", rows=len(rows), m=a.m)
    return SlopeSystem(tuple(rows), tuple(rhs), tuple(tags), a.m, rational)


def _acc(row: Dict[int, Number], c: int, v: Number) -> None:
    row[c] = row.get(c, 0) + v
    if row[c] == 0:
        del row[c]


@dataclass(frozen=True)
class SlopeAssignment:
    slopes: Tuple[Number, ...]
    det_sign: int = 0
    residual: float = 0.0

    def __len__(self) -> int:
        return len(self.slopes)

    def by_edge(self, a: AGraph) -> Dict[Edge, Number]:
        return dict(zip(a.edge_order, self.slopes))


def solve_system(sys: SlopeSystem, tol: Tolerances = Tolerances()) -> SlopeAssignment:
    if sys.rational:
        x, sgn = solve_rational(sys.rows, sys.rhs, sys.m)
        return SlopeAssignment(tuple(x), sgn, 0.0)
    A, b = sys.dense()
    x, sgn = solve_float(A, b, tol.pivot)
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution")
    r = float(np.max(np.abs(A @ x - b))) if sys.m else 0.0
    scale = max(float(np.max(np.abs(b))), float(np.max(np.sum(np.abs(A), axis=1))) * float(np.max(np.abs(x))))
    if r > tol.rtol * scale:
        raise SingularSystem("residual above tolerance", residual=r, scale=scale)
    return SlopeAssignment(tuple(float(v) for v in x), sgn, r)


@dataclass(frozen=True)
class OrderingResult:
    status: str                 # "EpsilonStrong" | "Ordered" | "Violated"
    min_margin: Optional[Number]
    pair: Optional[Tuple[int, int]] = None

    @property
    def ordered(self) -> bool:
        return self.status != "Violated"


def check_ordering(s: Union[SlopeAssignment, Sequence[Number]], p: PrecedenceRelation,
                   eps: Number) -> OrderingResult:
    sl = s.slopes if isinstance(s, SlopeAssignment) else s
    worst, wp = None, None
    for i, j, _, _ in p.pairs:
        g = sl[j] - sl[i]
        if worst is None or g < worst:
            worst, wp = g, (i, j)
    if worst is None:
        return OrderingResult("EpsilonStrong", None)
    if worst <= 0:
        return OrderingResult("Violated", worst, wp)
    return OrderingResult("EpsilonStrong" if worst >= eps else "Ordered", worst, wp)


def reconstruct_drawing(a: AGraph, s: Union[SlopeAssignment, Sequence[Number]], y: Sequence[Number],
                        rational: bool = False, ctol: float = 1e-7,
                        prec: Optional[PrecedenceRelation] = None,
                        check: bool = True) -> StraightLineDrawing:
    """Place every vertex from slopes and crossings (normalized frame)."""
    sl = [convert(v, rational) for v in (s.slopes if isinstance(s, SlopeAssignment) else s)]
    y = [convert(v, rational) for v in y]
    if check:
        p = prec or precedence_relation(a)
        if not check_ordering(sl, p, 0).ordered:
            raise PreconditionFailed("slopes violate the ordering constraints")
    coords: Dict[Vertex, Tuple[Number, Number]] = {}
    scale = max(1.0, max(abs(float(v)) for v in y) if y else 1.0)
    for v in a.embedding.vertices:
        side = a.sides[v]
        if side == Side.Y:
            coords[v] = (convert(0, rational), y[a.groups[v][0]])
            continue
        ps = a.incident_positions(v)
        if side == Side.R:
            ps = ps[::-1]
        i, j = ps[0], ps[1]
        den = sl[i] - sl[j]
        if den == 0:
            raise InconsistentConcurrency("anchor edges are parallel", vertex=v)
        x = (y[j] - y[i]) / den
        yy = y[i] + sl[i] * x
        for k in ps[2:]:
            dev = y[k] + sl[k] * x - yy
            if rational:
                if dev != 0:
                    raise InconsistentConcurrency("lines not concurrent", vertex=v)
            elif abs(float(dev)) > ctol * max(scale, abs(float(yy))):
                raise InconsistentConcurrency("lines not concurrent", vertex=v, deviation=float(dev))
        if side_of(x) != side:
            raise InconsistentConcurrency("vertex left its side", vertex=v)
        coords[v] = (x, yy)
    return StraightLineDrawing(a.embedding, coords)


# ---------------------------------------------------------------------------
# normalization, continuation and the driver


def _strip_scale(points) -> Fraction:
    """Power of two c with c * max|x| <= 1 (exact in binary floating point)."""
    mx = max((abs(to_fraction(p[0])) for p in points), default=Fraction(1))
    if mx == 0:
        return Fraction(1)
    k = 0
    while mx * Fraction(2) ** (-k) > 1:
        k += 1
    while k > -1074 and mx * Fraction(2) ** (-(k - 1)) <= 1:
        k -= 1
    return Fraction(2) ** (-k)


@dataclass
class _Data:
    y: List[Number]
    h: List[Tuple[int, Number]]


def _witness_data(a: AGraph, spec: BoundarySpec, rational: bool) -> Tuple[_Data, List[Number], Fraction]:
    w = a.witness
    c0 = _strip_scale(w.coords.values())
    inter = edge_intercepts(w)
    y0 = [convert(inter[e], rational) for e in a.edge_order]
    s0 = [convert(v / c0, rational) for v in _witness_slopes(a)]
    bidx = [i for i, _ in boundary_equations(a, BoundarySpec(
        {v: w.coords[v] for v in a.embedding.outer_face()}, spec.case, spec.e_b), rational)]
    return _Data(y0, [(i, s0[i]) for i in bidx]), s0, c0


def _lerp(p: Number, q: Number, t: Number) -> Number:
    return (1 - t) * p + t * q


@dataclass
class MorphStep:
    t: float
    det_sign: int
    margin: float
    residual: float

    def to_json(self) -> dict:
        return {"t": self.t, "det_sign": self.det_sign, "margin": self.margin, "residual": self.residual}


@dataclass
class MorphTrace:
    steps: List[MorphStep] = field(default_factory=list)
    eps_star: float = 0.0

    def to_jsonl(self) -> str:
        import json

        return "".join(json.dumps(s.to_json(), sort_keys=True) + "\n" for s in self.steps)


@dataclass
class SolveInfo:
    strategy: str
    slopes: SlopeAssignment
    eps: Number
    margin: Number
    scale: Fraction
    trace: Optional[MorphTrace] = None
    attempts: List[str] = field(default_factory=list)


def _targets_list(a: AGraph, targets) -> List[Number]:
    if isinstance(targets, Mapping):
        return [targets[e] for e in a.edge_order]
    t = list(targets)
    if len(t) != a.m:
        raise TargetsNotIncreasing("wrong number of targets", expected=a.m, got=len(t))
    return t


def check_targets(a: AGraph, y: Sequence[Number]) -> None:
    """Equality exactly within axis-vertex tie groups, strict increase elsewhere."""
    same = {}
    for v, grp in a.groups.items():
        for i in grp:
            same[i] = v
    for i in range(a.m - 1):
        tied = i in same and same.get(i + 1) == same[i]
        if tied and y[i] != y[i + 1]:
            raise TargetsNotIncreasing("edges at an axis vertex need equal targets", index=i)
        if not tied and not y[i] < y[i + 1]:
            raise TargetsNotIncreasing("targets must increase strictly", index=i)


def retarget_continuation(a: AGraph, delta: Mapping[Vertex, Tuple[Number, Number]], targets,
                          rational: bool = False, tol: Tolerances = Tolerances(),
                          max_step: float = 1.0, min_step: float = 2.0 ** -40,
                          coeffs: Optional[ProportionalityCoefficients] = None,
                          ) -> Tuple[SlopeAssignment, MorphTrace]:
    """Follow the linear homotopy from the witness data to the target data.

    Works in the normalized frame (both drawings scaled into the strip) and
    returns normalized slopes.  Only steps whose solution is eps*-strong are
    accepted.
    """
    if a.witness is None:
        raise MissingWitness("continuation needs a witness drawing")
    y1 = [convert(v, rational) for v in _targets_list(a, targets)]
    spec = boundary_spec(a, delta)
    c1 = _strip_scale(delta.values())
    nd = {v: (to_fraction(p[0]) * c1, p[1]) for v, p in delta.items()}
    h1 = boundary_equations(a, BoundarySpec(nd, spec.case, spec.e_b), rational)
    d0, s0, _ = _witness_data(a, spec, rational)
    cf = (coeffs or derive_coefficients_from_witness(a)).convert(rational)
    prec = precedence_relation(a)
    eps_star = min((min(abs(d0.y[j] - d0.y[i]), abs(y1[j] - y1[i])) for i, j, _, _ in prec.pairs),
                   default=0)
    trace = MorphTrace(eps_star=float(eps_star))
    t = convert(0, rational)
    step = convert(max_step, rational)
    sol: Optional[SlopeAssignment] = SlopeAssignment(tuple(s0), 0, 0.0)
    while t < 1:
        tn = min(convert(1, rational), t + step)
        yt = [_lerp(p, q, tn) for p, q in zip(d0.y, y1)]
        ht = [(i, _lerp(p, q, tn)) for (i, p), (_, q) in zip(d0.h, h1)]
        ok = False
        try:
            sysm = assemble_system(a, cf, yt, ht, rational)
            cand = solve_system(sysm, tol)
            res = check_ordering(cand, prec, eps_star)
            ok = res.status == "EpsilonStrong"
        except SingularSystem:
            ok = False
        if ok:
            t = tn
            sol = cand
            trace.steps.append(MorphStep(float(t), cand.det_sign, float(res.min_margin or 0), cand.residual))
            step = min(convert(max_step, rational), step * 2)
        else:
            step = step / 2
            if step < min_step:
                raise ContinuationStalled("step size underflow", t=float(t))
    return sol, trace


def morph_frames(a: AGraph, delta: Mapping[Vertex, Tuple[Number, Number]], targets, frames: int,
                 rational: bool = False, tol: Tolerances = Tolerances()) -> Tuple[List[StraightLineDrawing], MorphTrace]:
    """Drawings along the homotopy at t = k / frames (caller coordinates)."""
    if a.witness is None:
        raise MissingWitness("morphing needs a witness drawing")
    y1 = [convert(v, rational) for v in _targets_list(a, targets)]
    spec = boundary_spec(a, delta)
    c1 = _strip_scale(delta.values())
    nd = {v: (to_fraction(p[0]) * c1, p[1]) for v, p in delta.items()}
    h1 = boundary_equations(a, BoundarySpec(nd, spec.case, spec.e_b), rational)
    d0, s0, c0 = _witness_data(a, spec, rational)
    cf = derive_coefficients_from_witness(a).convert(rational)
    prec = precedence_relation(a)
    out, trace = [], MorphTrace()
    for k in range(frames + 1):
        t = convert(Fraction(k, max(frames, 1)), rational)
        yt = [_lerp(p, q, t) for p, q in zip(d0.y, y1)]
        ht = [(i, _lerp(p, q, t)) for (i, p), (_, q) in zip(d0.h, h1)]
        sol = solve_system(assemble_system(a, cf, yt, ht, rational), tol)
        res = check_ordering(sol, prec, 0)
        trace.steps.append(MorphStep(float(t), sol.det_sign, float(res.min_margin or 0), sol.residual))
        d = reconstruct_drawing(a, sol, yt, rational, tol.ctol, prec)
        scale = _lerp(convert(1 / c0, rational), convert(1 / c1, rational), t)
        out.append(d.with_coords({v: (p[0] * scale, p[1]) for v, p in d.coords.items()}))
    return out, trace


def draw_a_graph(a: AGraph, targets, delta: Mapping[Vertex, Tuple[Number, Number]],
                 rational: bool = False, tol: Tolerances = Tolerances(), seed: int = 0,
                 info: Optional[list] = None, verify: bool = True) -> StraightLineDrawing:
    """Draw ``a`` with prescribed crossings and outer shape.

    Strategy ladder: witness coefficients solved directly, then continuation
    from the witness, then default coefficients, then random coefficients.
    Every candidate is accepted only if its slopes are ordered, the
    reconstruction is concurrent and the drawing passes the oracles.  When a
    list is passed as ``info`` a SolveInfo record is appended to it.
    """
    y = [convert(v, rational) for v in _targets_list(a, targets)]
    check_targets(a, y)
    spec = boundary_spec(a, delta)
    check_compatible(a, spec, y, rational)
    if a.m <= 4:
        d = StraightLineDrawing(a.embedding, {v: tuple(convert(c, rational) for c in delta[v])
                                              for v in a.embedding.vertices})
        if info is not None:
            info.append(SolveInfo("outer-shape", SlopeAssignment(()), 0, 0, Fraction(1)))
        return d
    c = _strip_scale(delta.values())
    nd = {v: (to_fraction(p[0]) * c, p[1]) for v, p in delta.items()}
    h = boundary_equations(a, BoundarySpec(nd, spec.case, spec.e_b), rational)
    prec = precedence_relation(a)
    eps = prec.default_eps(y)
    attempts: List[str] = []

    def finish(sol: SlopeAssignment, name: str, trace=None) -> StraightLineDrawing:
        res = check_ordering(sol, prec, 0)
        if not res.ordered:
            raise PreconditionFailed("ordering violated")
        d = reconstruct_drawing(a, sol, y, rational, tol.ctol, prec, check=False)
        inv = convert(1 / c, rational)
        out = d.with_coords({v: (p[0] * inv, p[1]) for v, p in d.coords.items()})
        if verify:
            if not is_plane(out).plane or not check_devillers(out, a.embedding):
                raise InconsistentConcurrency("reconstructed drawing fails the oracles")
        if info is not None:
            info.append(SolveInfo(name, sol, eps, res.min_margin, c, trace, attempts))
        return out

    def direct(cf: ProportionalityCoefficients, name: str) -> StraightLineDrawing:
        sol = solve_system(assemble_system(a, cf, y, h, rational), tol)
        return finish(sol, name)

    plans = []
    if a.witness is not None:
        wc = derive_coefficients_from_witness(a)
        plans.append(("witness-direct", lambda: direct(wc, "witness-direct")))

        def cont():
            sol, trace = retarget_continuation(a, delta, y, rational, tol, max_step=0.5)
            return finish(sol, "continuation", trace)

        plans.append(("continuation", cont))
    dc = default_coefficients(a)
    plans.append(("default", lambda: direct(dc, "default")))
    rng = np.random.default_rng(seed)
    for r in range(32):
        rc = random_coefficients(a, rng)
        plans.append((f"random-{r}", (lambda rc=rc, r=r: direct(rc, f"random-{r}"))))
    for name, fn in plans:
        try:
            return fn()
        except (SingularSystem, PreconditionFailed, InconsistentConcurrency, ContinuationStalled) as exc:
            attempts.append(f"{name}: {exc.code}")
    raise SolverInitializationFailed("no coefficient choice produced an ordered solution",
                                     attempts=attempts)
