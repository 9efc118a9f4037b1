from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import drawing
from freeset.drawing import check_devillers, is_plane
from freeset.errors import InconsistentSides, NotPlaneWitness, PreconditionFailed, TargetsNotIncreasing
from freeset.harness import fixture, gen_free_set_request
from freeset.pipeline import (
    FreeSetRequest,
    choose_rotation,
    draw_collinear,
    realize_free_set,
    triangulate_preserving_curve,
)


def _hex():
    return fixture("HEX-1")


def test_hexagon_triangulation_adds_three_chords():
    tw = triangulate_preserving_curve(_hex().request([0, 10]))
    inner = [e for e in tw.added if not any(str(v).startswith("_frame") for v in e)]
    assert len(inner) == 3
    assert tw.drawing.embedding.is_triangulation()
    assert len(tw.frame) == 3


def test_hexagon_axis_chord_is_reported_on_curve():
    tw = triangulate_preserving_curve(_hex().request([0, 10]))
    assert tw.on_curve == [("s", "t")]


@pytest.mark.parametrize("rational", [True, False])
def test_hexagon_drawn_at_heights(rational):
    f = _hex()
    res = draw_collinear(f.request([0, 10]), rational)
    d = res.drawing
    assert float(d.coords["s"][0]) == 0 and float(d.coords["s"][1]) == 0
    assert float(d.coords["t"][0]) == 0 and float(d.coords["t"][1]) == 10
    assert set(d.embedding.edges()) == set(f.embedding.edges())
    assert is_plane(d).plane and check_devillers(d, f.embedding)


def test_free_set_on_unit_square_corners():
    # four axis vertices of a witness placed on the corners of a unit square
    c = {"s0": (0, 0), "s1": (0, 1), "s2": (0, 2), "s3": (0, 3),
         "l": (-2, Fraction(3, 2)), "r": (2, Fraction(3, 2))}
    edges = [("s0", "s1"), ("s1", "s2"), ("s2", "s3")] + [(x, f"s{i}") for x in "lr" for i in range(4)]
    w = drawing(c, edges)
    pts = [(0, 0), (1, 0), (1, 1), (0, 1)]
    res = realize_free_set(FreeSetRequest(w, ("s0", "s1", "s2", "s3"), pts), rational=True)
    d = res.drawing
    assert {d.coords[v] for v in ("s0", "s1", "s2", "s3")} == {tuple(map(Fraction, p)) for p in pts}
    assert is_plane(d).plane and check_devillers(d, w.embedding)


def test_collinear_points_skip_rotation():
    f = _hex()
    res = realize_free_set(f.request([(0, 5), (0, -5)]), rational=True)
    assert res.extra["rotation"] == (1, 0) and res.extra["delta"] is None
    assert res.drawing.coords["s"] == (0, -5) and res.drawing.coords["t"] == (0, 5)


def test_non_increasing_heights_rejected():
    with pytest.raises(TargetsNotIncreasing):
        draw_collinear(_hex().request([10, 0]))
    with pytest.raises(TargetsNotIncreasing):
        draw_collinear(_hex().request([3, 3]))


def test_witness_checks():
    f = _hex()
    with pytest.raises(InconsistentSides):
        draw_collinear(FreeSetRequest(f.drawing, ("a", "t"), (0, 1)))
    bow = drawing({"a": (-1, -1), "b": (1, 1), "c": (-1, 1), "d": (1, -1)}, ["ab", "cd"])
    with pytest.raises(NotPlaneWitness):
        draw_collinear(FreeSetRequest(bow, ("a",), (0,)))
    with pytest.raises(PreconditionFailed):
        draw_collinear(FreeSetRequest(f.drawing, ("s", "t"), (0,)))


def test_duplicate_points_rejected():
    with pytest.raises(PreconditionFailed):
        realize_free_set(_hex().request([(1, 1), (1, 1)]))


def test_rotation_separates_heights():
    cs = choose_rotation([(0, 0), (1, 0), (2, 0)])
    c, s = cs
    assert c * c + s * s == 1 and s != 0
    assert choose_rotation([(0, 0), (0, 1)]) == (1, 0)


@settings(max_examples=15)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=2, max_size=2, unique=True))
def test_hexagon_any_two_points(pts):
    res = realize_free_set(_hex().request(pts), rational=True)
    d = res.drawing
    assert {d.coords["s"], d.coords["t"]} == {tuple(map(Fraction, p)) for p in pts}
    assert is_plane(d).plane and check_devillers(d, _hex().embedding)


@pytest.mark.parametrize("seed", range(4))
def test_generated_requests(seed):
    req = gen_free_set_request(seed, 2 + seed)
    res = realize_free_set(req)
    d = res.drawing
    placed = {(float(d.coords[v][0]), float(d.coords[v][1])) for v in req.S}
    assert placed == {(float(x), float(y)) for x, y in req.targets}
    assert is_plane(d).plane and check_devillers(d, req.witness.embedding)
