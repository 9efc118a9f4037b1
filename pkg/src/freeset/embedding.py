"""Rotation-system embeddings of simple plane graphs.

A vertex maps to the counter-clockwise cyclic list of its neighbours.  A
half-edge is an ordered pair ``(u, v)``; its twin is ``(v, u)`` and its
successor along the face on its left is ``(v, w)`` where ``w`` precedes ``u``
in the rotation at ``v``.  With this convention bounded faces of a plane
drawing are traversed counter-clockwise and the outer face clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import EdgeExists, MalformedEmbedding, WouldCreateMultiEdge
from .exact import ccw_sort

Vertex = Hashable
Edge = Tuple[Vertex, Vertex]
HalfEdge = Tuple[Vertex, Vertex]


def ekey(u: Vertex, v: Vertex) -> Edge:
    """Canonical (sorted) key of an undirected edge."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class CombinatorialEmbedding:
    """Immutable rotation system with an optional designated outer face.

    ``outer`` is any half-edge whose left face is the outer face.
    """

    rot: Mapping[Vertex, Tuple[Vertex, ...]]
    outer: Optional[HalfEdge] = None
    _pos: Dict[Vertex, Dict[Vertex, int]] = field(init=False, repr=False)
    _m: int = field(init=False, repr=False, default=0)

    def __post_init__(self) -> None:
        rot = {v: tuple(ns) for v, ns in self.rot.items()}
        object.__setattr__(self, "rot", rot)
        pos: Dict[Vertex, Dict[Vertex, int]] = {}
        for v, ns in rot.items():
            p = {w: i for i, w in enumerate(ns)}
            if len(p) != len(ns):
                raise MalformedEmbedding("repeated neighbour", vertex=v)
            if v in p:
                raise MalformedEmbedding("loop", vertex=v)
            pos[v] = p
        for v, ns in rot.items():
            for w in ns:
                if w not in pos or v not in pos[w]:
                    raise MalformedEmbedding("missing twin", half_edge=(v, w))
        if self.outer is not None:
            u, v = self.outer
            if u not in pos or v not in pos[u]:
                raise MalformedEmbedding("outer half-edge not in graph", half_edge=self.outer)
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_m", sum(len(ns) for ns in rot.values()) // 2)

    # ------------------------------------------------------------------ basics
    @property
    def vertices(self) -> List[Vertex]:
        return list(self.rot)

    def n(self) -> int:
        return len(self.rot)

    def m(self) -> int:
        return self._m

    def degree(self, v: Vertex) -> int:
        return len(self.rot[v])

    def neighbors(self, v: Vertex) -> Tuple[Vertex, ...]:
        return self.rot[v]

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self._pos.get(u, ())

    def edges(self) -> List[Edge]:
        """Edge keys in a deterministic order (sorted)."""
        out = [ekey(u, v) for u, ns in self.rot.items() for v in ns if u < v]
        out.sort()
        return out

    def twin(self, h: HalfEdge) -> HalfEdge:
        return (h[1], h[0])

    def next(self, h: HalfEdge) -> HalfEdge:
        u, v = h
        ns = self.rot[v]
        return (v, ns[self._pos[v][u] - 1])

    def ccw_after(self, v: Vertex, w: Vertex, k: int = 1) -> Vertex:
        ns = self.rot[v]
        return ns[(self._pos[v][w] + k) % len(ns)]

    def ccw_before(self, v: Vertex, w: Vertex) -> Vertex:
        return self.ccw_after(v, w, -1)

    def index(self, v: Vertex, w: Vertex) -> int:
        return self._pos[v][w]

    # ------------------------------------------------------------------- faces
    def face_of(self, h: HalfEdge) -> Tuple[Vertex, ...]:
        """Vertex cycle of the face to the left of ``h`` starting at ``h[0]``."""
        out = []
        cur = h
        limit = 2 * self.m() + 1
        while True:
            out.append(cur[0])
            cur = self.next(cur)
            if cur == h:
                break
            if len(out) > limit:
                raise MalformedEmbedding("face walk does not close", half_edge=h)
        return tuple(out)

    def faces(self) -> List[Tuple[Vertex, ...]]:
        """All faces as vertex cycles, each rotated to start at its least half-edge."""
        seen = set()
        result = []
        for u in sorted(self.rot):
            for v in self.rot[u]:
                if (u, v) in seen:
                    continue
                cyc = self.face_of((u, v))
                k = len(cyc)
                for i in range(k):
                    seen.add((cyc[i], cyc[(i + 1) % k]))
                result.append(cyc)
        return result

    def outer_face(self) -> Optional[Tuple[Vertex, ...]]:
        if self.outer is None:
            return None
        return self.face_of(self.outer)

    def outer_vertices(self) -> Tuple[Vertex, ...]:
        f = self.outer_face()
        return () if f is None else f

    def is_outer(self, face: Sequence[Vertex]) -> bool:
        if self.outer is None:
            return False
        return _same_cycle(face, self.outer_face())

    def components(self) -> int:
        seen = set()
        count = 0
        for s in self.rot:
            if s in seen:
                continue
            count += 1
            stack = [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                for w in self.rot[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return count

    def check(self) -> None:
        """Euler check: a genus-0 rotation system has n - m + f = 1 + c."""
        n, m, f = self.n(), self.m(), len(self.faces())
        isolated = sum(1 for v in self.rot if not self.rot[v])
        c = self.components()
        # isolated vertices contribute no half-edges, hence no traced face
        if n - m + f + isolated != 2 * c:
            raise MalformedEmbedding("Euler relation fails", n=n, m=m, f=f, components=c)

    def is_triangulation(self) -> bool:
        return self.n() >= 3 and all(len(f) == 3 for f in self.faces())

    # -------------------------------------------------------------- mutations
    def _mutable(self) -> Dict[Vertex, List[Vertex]]:
        return {v: list(ns) for v, ns in self.rot.items()}

    def with_outer(self, outer: Optional[HalfEdge]) -> "CombinatorialEmbedding":
        return CombinatorialEmbedding(self.rot, outer)

    def remove_edge(self, u: Vertex, v: Vertex) -> "CombinatorialEmbedding":
        rot = self._mutable()
        rot[u].remove(v)
        rot[v].remove(u)
        outer = self.outer
        if outer is not None and ekey(*outer) == ekey(u, v):
            outer = self.next(outer) if self.next(outer) != (v, u) else None
        return CombinatorialEmbedding(rot, outer)

    def add_edge(self, u: Vertex, v: Vertex, after_u: Vertex, after_v: Vertex,
                 outer: Optional[HalfEdge] = None) -> "CombinatorialEmbedding":
        """Insert edge uv so that v follows ``after_u`` ccw at u (and symmetrically)."""
        if self.has_edge(u, v):
            raise EdgeExists("edge already present", edge=ekey(u, v))
        rot = self._mutable()
        rot[u].insert(rot[u].index(after_u) + 1, v)
        rot[v].insert(rot[v].index(after_v) + 1, u)
        return CombinatorialEmbedding(rot, self.outer if outer is None else outer)

    def remove_vertices(self, drop: Iterable[Vertex]) -> "CombinatorialEmbedding":
        drop = set(drop)
        rot = {v: [w for w in ns if w not in drop] for v, ns in self.rot.items() if v not in drop}
        return CombinatorialEmbedding(rot, None)

    def contract_edge(self, x: Vertex, y: Vertex) -> "CombinatorialEmbedding":
        """Identify y into x in a triangulation; x keeps its id."""
        if not self.has_edge(x, y):
            raise MalformedEmbedding("not an edge", edge=(x, y))
        a = self.ccw_after(x, y)
        b = self.ccw_before(x, y)
        common = set(self.rot[x]) & set(self.rot[y])
        if common != {a, b} or a == b:
            raise WouldCreateMultiEdge("edge lies on a separating triangle", edge=ekey(x, y))
        xs = _rotate_to_after(self.rot[x], y)  # a ... b
        ys = _rotate_to_after(self.rot[y], x)  # b ... a
        merged = list(xs)
        for w in ys:
            if w not in (a, b):
                merged.append(w)
        # place y's private neighbours between b and a: xs ends at b, ys runs b..a
        rot = self._mutable()
        del rot[y]
        rot[x] = merged
        for w in self.rot[y]:
            if w == x:
                continue
            if w in (a, b):
                rot[w].remove(y)
            else:
                lst = rot[w]
                lst[lst.index(y)] = x
        outer = self.outer
        if outer is not None:
            f = self.face_of(outer)
            if y in f or x in f:
                outer = None
        emb = CombinatorialEmbedding(rot, outer)
        if outer is None and self.outer is not None:
            emb = emb.with_outer(_relocate_outer(self, emb, x, y))
        return emb

    def flip(self, x: Vertex, y: Vertex) -> Tuple["CombinatorialEmbedding", Tuple[Vertex, Vertex]]:
        """Replace edge xy by the other diagonal of its two incident triangles.

        Returns the new embedding and the new edge ``(z, b)``, where z is the
        apex of the face left of ``(y, x)`` and b the apex on the other side.
        """
        z = self.ccw_before(x, y)
        b = self.ccw_after(x, y)
        if z == b:
            raise MalformedEmbedding("edge is not flanked by two triangles", edge=(x, y))
        if self.has_edge(z, b):
            raise EdgeExists("flip target already present", edge=ekey(z, b))
        rot = self._mutable()
        rot[x].remove(y)
        rot[y].remove(x)
        # at z the neighbours y and x are consecutive; b goes between them
        rz = rot[z]
        iy, ix = rz.index(y), rz.index(x)
        rz.insert(max(iy, ix) if abs(iy - ix) == 1 else len(rz), b)
        rb = rot[b]
        iy, ix = rb.index(y), rb.index(x)
        rb.insert(max(iy, ix) if abs(iy - ix) == 1 else len(rb), z)
        outer = self.outer
        if outer is not None and ekey(*outer) == ekey(x, y):
            outer = None
        emb = CombinatorialEmbedding(rot, outer)
        if outer is None and self.outer is not None:
            emb = emb.with_outer(_find_face_half_edge(emb, self.outer_face(), exclude=(x, y)))
        return emb, (z, b)

    # --------------------------------------------------------- constructors
    @staticmethod
    def from_coordinates(coords: Mapping[Vertex, Tuple], edges: Iterable[Edge]) -> "CombinatorialEmbedding":
        """Rotation system of a straight-line drawing (exact angular sort)."""
        adj: Dict[Vertex, List[Vertex]] = {v: [] for v in coords}
        for u, v in edges:
            if u == v:
                raise MalformedEmbedding("loop", vertex=u)
            adj[u].append(v)
            adj[v].append(u)
        rot = {}
        for v, ns in adj.items():
            rot[v] = tuple(ccw_sort(coords[v], [(w, coords[w]) for w in ns]))
        outer = _outer_half_edge(coords, rot)
        return CombinatorialEmbedding(rot, outer)


def _rotate_to_after(ns: Sequence[Vertex], w: Vertex) -> List[Vertex]:
    i = list(ns).index(w)
    return list(ns[i + 1:]) + list(ns[:i])


def _same_cycle(a: Sequence[Vertex], b: Optional[Sequence[Vertex]]) -> bool:
    if b is None or len(a) != len(b):
        return False
    k = len(a)
    if k == 0:
        return True
    for s in range(k):
        if all(a[(s + i) % k] == b[i] for i in range(k)):
            return True
    return False


def _find_face_half_edge(emb: CombinatorialEmbedding, cycle: Sequence[Vertex],
                         exclude: Tuple[Vertex, Vertex] = ()) -> Optional[HalfEdge]:
    k = len(cycle)
    for i in range(k):
        u, v = cycle[i], cycle[(i + 1) % k]
        if {u, v} == set(exclude) or not emb.has_edge(u, v):
            continue
        return (u, v)
    return None


def _relocate_outer(old: CombinatorialEmbedding, new: CombinatorialEmbedding,
                    x: Vertex, y: Vertex) -> Optional[HalfEdge]:
    f = old.outer_face()
    g = [x if w == y else w for w in f]
    dedup = [w for i, w in enumerate(g) if w != g[i - 1]] if len(g) > 1 else g
    for i in range(len(dedup)):
        u, v = dedup[i], dedup[(i + 1) % len(dedup)]
        if u != v and new.has_edge(u, v):
            h = (u, v)
            if len(new.face_of(h)) == len(dedup):
                return h
    return None


def _outer_half_edge(coords: Mapping[Vertex, Tuple], rot: Mapping[Vertex, Sequence[Vertex]]) -> Optional[HalfEdge]:
    cands = [v for v in rot if rot[v]]
    if not cands:
        return None
    p = min(cands, key=lambda v: (coords[v][1], coords[v][0]))
    # neighbours of the lowest-leftmost vertex span angles in [0, pi); the
    # outer wedge runs from the last of them counter-clockwise to the first
    ns = ccw_sort(coords[p], [(w, coords[w]) for w in rot[p]], start=(1, 0))
    return (p, ns[-1])
