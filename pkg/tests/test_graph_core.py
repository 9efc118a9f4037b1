from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import drawing, k4_centered, k4_convex, octahedron
from freeset.drawing import (
    CrossingSequence,
    EdgeItem,
    StraightLineDrawing,
    VertexItem,
    check_devillers,
    crossing_sequence_of,
    is_plane,
)
from freeset.embedding import CombinatorialEmbedding, ekey
from freeset.errors import GraphMismatch, MalformedEmbedding, WouldCreateMultiEdge
from freeset.exact import ccw_sort, line_intercept, orient, segments_intersect
from freeset.harness import fixture


# --- exact predicates -------------------------------------------------------

def test_orient_signs():
    assert orient((0, 0), (1, 0), (0, 1)) == 1
    assert orient((0, 0), (0, 1), (1, 0)) == -1
    assert orient((0, 0), (1, 1), (2, 2)) == 0


def test_orient_is_exact_where_floats_round():
    # exactly collinear in binary floating point, nearly collinear just off it
    a, b = (0.5, 0.5), (12.0, 12.0)
    c = (24.0, 24.0)
    assert orient(a, b, c) == 0
    assert orient(a, b, (24.0, 24.0 + 2 ** -40)) == 1


coord = st.integers(-50, 50)
point = st.tuples(coord, coord)


@given(point, point, point)
def test_orient_antisymmetry(a, b, c):
    assert orient(a, b, c) == -orient(b, a, c) == orient(b, c, a)


@given(point, point, point, point)
def test_segment_intersection_symmetric(p, q, r, s):
    assert segments_intersect(p, q, r, s) == segments_intersect(r, s, p, q)


def test_segment_intersection_cases():
    assert segments_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_intersect((0, 0), (1, 0), (2, 0), (3, 0))
    assert segments_intersect((0, 0), (2, 0), (1, 0), (3, 0))      # overlap
    assert segments_intersect((0, 0), (2, 0), (2, 0), (2, 5))      # touching endpoint


def test_line_intercept_exact():
    assert line_intercept((-1, 0), (1, 2)) == 1
    assert line_intercept((-3, 1), (1, 2)) == Fraction(7, 4)


def test_ccw_sort_starts_at_positive_x_axis():
    items = [("n", (0, 1)), ("w", (-1, 0)), ("e", (1, 0)), ("s", (0, -1))]
    assert ccw_sort((0, 0), items) == ["e", "n", "w", "s"]


# --- embeddings ---------------------------------------------------------------

def test_faces_of_single_triangle():
    d = drawing({"a": (0, 0), "b": (1, 0), "c": (0, 1)}, ["ab", "bc", "ca"])
    faces = d.embedding.faces()
    assert len(faces) == 2 and all(len(f) == 3 for f in faces)


def test_faces_cube_all_quads():
    emb = fixture("CUBE").embedding
    faces = emb.faces()
    assert len(faces) == 6 and all(len(f) == 4 for f in faces)


def test_faces_h5():
    faces = fixture("H5").embedding.faces()
    assert sorted(len(f) for f in faces) == [3, 3, 3, 3, 4]


@pytest.mark.parametrize("name", ["H5", "CUBE", "CUBE-T", "OCTA-C", "SPLIT-1", "FLIP-1", "ONC-1", "HEX-1",
                                  "CONTRACT-1"])
def test_euler_and_half_edge_partition(name):
    emb = fixture(name).embedding
    faces = emb.faces()
    assert emb.n() - emb.m() + len(faces) == 2
    walked = [(f[i], f[(i + 1) % len(f)]) for f in faces for i in range(len(f))]
    assert len(walked) == len(set(walked)) == 2 * emb.m()


def test_outer_face_runs_clockwise():
    d = fixture("H5").drawing
    from freeset.exact import signed_area2

    f = d.embedding.outer_face()
    assert signed_area2([d.coords[v] for v in f]) < 0
    assert set(f) == {"v", "p", "r"}


def test_malformed_rotation_rejected():
    with pytest.raises(MalformedEmbedding):
        CombinatorialEmbedding({"a": ("b",), "b": ()})
    with pytest.raises(MalformedEmbedding):
        CombinatorialEmbedding({"a": ("a",)})


def test_contract_k4_gives_triangle():
    emb = k4_centered().embedding.contract_edge("a", "o")
    assert (emb.n(), emb.m()) == (3, 3)


def test_contract_octahedron_edge():
    emb = octahedron().embedding.contract_edge("D", "E")
    assert (emb.n(), emb.m()) == (5, 9) and emb.is_triangulation()


def test_contract_on_separating_triangle_rejected():
    d = k4_centered()
    c = dict(d.coords)
    c["w"] = (Fraction(-1, 2), Fraction(-1, 2))
    stacked = drawing(c, ["ab", "bc", "ca", "ao", "bo", "co", "aw", "bw", "ow"])
    with pytest.raises(WouldCreateMultiEdge):
        stacked.embedding.contract_edge("a", "o")


def test_flip_swaps_diagonal():
    emb = k4_convex().embedding.remove_edge("b", "d")
    new, e = emb.flip("a", "c")
    assert ekey(*e) == ("b", "d") and not new.has_edge("a", "c")


# --- drawings -----------------------------------------------------------------

def test_is_plane_k4_variants():
    assert is_plane(k4_centered()).plane
    rep = is_plane(k4_convex())
    assert rep.count == 1 and not rep.plane


def test_fixtures_are_plane():
    for name in ("CUBE", "H5", "OCTA-C", "HEX-1"):
        assert is_plane(fixture(name).drawing).plane


def test_crossing_sequence_single_edge():
    seq = crossing_sequence_of(drawing({"p": (-1, 0), "q": (1, 2)}, ["pq"]))
    assert seq.items == (EdgeItem(("p", "q")),) and seq.targets == (1.0,)


def test_crossing_sequence_h5():
    seq = crossing_sequence_of(fixture("H5").drawing, exact=True)
    assert seq.items == (VertexItem("v"), EdgeItem(("p", "q")), VertexItem("u"), EdgeItem(("p", "r")))
    assert seq.targets == (0, Fraction(5, 3), 2, 3)


def test_crossing_sequence_empty_when_axis_untouched():
    seq = crossing_sequence_of(drawing({"a": (1, 0), "b": (2, 0)}, ["ab"]))
    assert len(seq) == 0


def test_crossing_sequence_omits_edges_on_the_axis():
    d = drawing({"a": (0, 0), "b": (0, 1), "c": (1, 0)}, ["ab", "bc", "ca"])
    seq = crossing_sequence_of(d)
    assert all(isinstance(i, VertexItem) for i in seq.items)


def test_crossing_sequence_shape_checks():
    with pytest.raises(ValueError):
        CrossingSequence((VertexItem("a"),), (1, 2), 0)
    tied = CrossingSequence((VertexItem("a"), VertexItem("b")), (1, 1), 0)
    assert not tied.strictly_increasing() and tied.min_gap() == 0


def test_devillers_identity_and_bowtie():
    d = k4_centered()
    assert check_devillers(d, d.embedding)
    quad = drawing({"a": (-1, -1), "b": (1, -1), "c": (1, 1), "d": (-1, 1)}, ["ab", "bc", "cd", "da"])
    assert check_devillers(quad, quad.embedding)
    bow = StraightLineDrawing(quad.embedding, {"a": (-1, -1), "b": (1, -1), "c": (-1, 1), "d": (1, 1)})
    assert not check_devillers(bow, quad.embedding)


def test_devillers_detects_rotation_flip_in_h5():
    d = fixture("H5").drawing
    c = dict(d.coords)
    c["q"] = (Fraction(1), Fraction(4))      # q jumps above pr: order at v changes
    assert not check_devillers(StraightLineDrawing(d.embedding, c), d.embedding)


def test_devillers_graph_mismatch():
    with pytest.raises(GraphMismatch):
        check_devillers(k4_centered(), k4_convex().embedding)


@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=9, unique=True))
def test_rotation_from_coordinates_matches_drawing(pts):
    # a star around the first point: its rotation is the angular order
    c = {i: p for i, p in enumerate(pts)}
    hub = 0
    others = [i for i in c if i != hub and c[i] != c[hub]]
    # drop points collinear with the hub in the same direction
    seen, keep = [], []
    for i in others:
        dx, dy = c[i][0] - c[hub][0], c[i][1] - c[hub][1]
        if any(dx * ey - dy * ex == 0 and dx * ex + dy * ey > 0 for ex, ey in seen):
            continue
        seen.append((dx, dy))
        keep.append(i)
    d = drawing({k: c[k] for k in [hub] + keep}, [(hub, i) for i in keep])
    assert check_devillers(d, d.embedding)
