from fractions import Fraction

import pytest

from conftest import drawing, k4_centered, octahedron
from freeset.drawing import CrossingSequence, EdgeItem, Side, VertexItem, check_devillers, is_plane
from freeset.embedding import ekey
from freeset.errors import InconsistentSides, PreconditionFailed, TargetsNotIncreasing
from freeset.harness import fixture, gen_triangulation_instance, verify_output
from freeset.reducer import (
    ReductionInstance,
    apply_flip,
    classify_edges,
    contract,
    draw_triangulation,
    find_contractible_edge,
    find_edge_on_curve,
    find_flippable_edges,
    find_separating_triangle,
    replace_edge_on_curve,
    replay_edges,
    tutte_draw,
)

TRIANGULATIONS = ["CUBE-T", "OCTA-C", "SPLIT-1", "FLIP-1", "ONC-1", "CONTRACT-1"]


def _inst(name, rational=True):
    return fixture(name).instance(rational)


# --- structure finders --------------------------------------------------------

def test_separating_triangles():
    assert find_separating_triangle(k4_centered().embedding) is None
    assert find_separating_triangle(octahedron().embedding) is None
    assert set(find_separating_triangle(_inst("SPLIT-1").T)) == {"x", "y", "z"}
    d = k4_centered()
    c = dict(d.coords)
    c["w"] = (Fraction(-1, 2), Fraction(-1, 2))
    stacked = drawing(c, ["ab", "bc", "ca", "ao", "bo", "co", "aw", "bw", "ow"])
    assert set(find_separating_triangle(stacked.embedding)) == {"a", "b", "o"}


def test_edge_classes_on_octahedron():
    ec = classify_edges(_inst("OCTA-C"))
    kinds = [ec.of(*e) for e in _inst("OCTA-C").T.edges()]
    assert kinds.count("crossing") == 4
    assert "marked" not in kinds


def test_cube_t_is_a_base_case():
    inst = _inst("CUBE-T")
    ec = classify_edges(inst)
    assert find_separating_triangle(inst.T) is None
    assert find_contractible_edge(inst, ec) is None
    assert find_flippable_edges(inst, ec) == []
    assert find_edge_on_curve(inst) is None


def test_flip_fixture_offers_the_documented_flip():
    inst = _inst("FLIP-1")
    matches = find_flippable_edges(inst)
    assert any({m.x, m.y} == {0, 1} and {m.z, m.b} == {2, 4} for m in matches)


def test_apply_flip_inserts_item_between_neighbours():
    inst = _inst("FLIP-1")
    m = next(m for m in find_flippable_edges(inst) if {m.x, m.y} == {0, 1})
    child, undo = apply_flip(inst, m)
    assert undo["removed"] == (0, 1) and undo["added"] == ekey(m.z, m.b)
    pos = {ekey(*it.e): i for i, it in enumerate(child.items) if isinstance(it, EdgeItem)}
    new = pos[ekey(m.z, m.b)]
    assert {pos[ekey(m.x, m.b)], pos[ekey(m.y, m.b)]} == {new - 1, new + 1}
    assert all(a < b for a, b in zip(child.targets, child.targets[1:]))


def test_on_curve_edge_replacement():
    inst = _inst("ONC-1")
    xy = find_edge_on_curve(inst)
    assert set(xy) == {"D", "E"}
    child, undo = replace_edge_on_curve(inst, xy)
    assert not child.T.has_edge("D", "E")
    assert len(child.items) == len(inst.items) + 1


def test_contract_keeps_targets_and_merges_items():
    inst = _inst("OCTA-C")
    keep, merge = find_contractible_edge(inst)
    child = contract(inst, keep, merge)
    assert child.T.n() == inst.T.n() - 1
    assert child.targets == inst.targets
    assert merge not in child.sides
    halved = contract(inst, keep, merge, halve=True)
    assert halved.eps == inst.eps / 2


def test_tutte_places_single_inner_vertex_at_centroid():
    d = k4_centered()
    fixed = {v: tuple(map(Fraction, d.coords[v])) for v in "abc"}
    out = tutte_draw(d.embedding, fixed, rational=True)
    cx = sum(p[0] for p in fixed.values()) / 3
    cy = sum(p[1] for p in fixed.values()) / 3
    assert out.coords["o"] == (cx, cy)


# --- instance checks ------------------------------------------------------------

def test_check_instance_rejects_wrong_items():
    inst = _inst("OCTA-C")
    d = fixture("OCTA-C").drawing
    seq = inst.crossing_sequence()
    short = CrossingSequence(seq.items[:-1], seq.targets[:-1], seq.eps)
    with pytest.raises(InconsistentSides):
        ReductionInstance.create(d.embedding, short, inst.delta, inst.sides, rational=True)


def test_check_instance_rejects_wide_eps():
    inst = _inst("OCTA-C")
    d = fixture("OCTA-C").drawing
    seq = inst.crossing_sequence()
    wide = CrossingSequence(seq.items, seq.targets, Fraction(1, 2))
    with pytest.raises(TargetsNotIncreasing):
        ReductionInstance.create(d.embedding, wide, inst.delta, inst.sides, rational=True)


def test_check_instance_rejects_decreasing_targets():
    inst = _inst("OCTA-C")
    d = fixture("OCTA-C").drawing
    seq = inst.crossing_sequence()
    t = list(seq.targets)
    t[1], t[2] = t[2], t[1]
    with pytest.raises(TargetsNotIncreasing):
        ReductionInstance.create(d.embedding, CrossingSequence(seq.items, tuple(t), Fraction(1, 10)),
                                 inst.delta, inst.sides, rational=True)


def test_check_instance_rejects_inner_start():
    # a curve that starts at an inner vertex does not reach the outer face
    d = k4_centered()
    seq = CrossingSequence((VertexItem("o"), EdgeItem(("a", "b")), EdgeItem(("b", "c"))),
                           (0, -1, 1), Fraction(1, 10))
    sides = {v: d.side(v) for v in d.coords}
    with pytest.raises((InconsistentSides, TargetsNotIncreasing)):
        ReductionInstance.create(d.embedding, seq, {v: d.coords[v] for v in "abc"}, sides, rational=True)


def test_non_triangulation_rejected():
    d = fixture("HEX-1").drawing
    seq = CrossingSequence((VertexItem("s"), VertexItem("t")), (-1, 1), Fraction(1, 10))
    with pytest.raises(PreconditionFailed):
        ReductionInstance.create(d.embedding, seq, dict(d.coords), d.sides(), rational=True)


# --- end to end -------------------------------------------------------------------

EXPECTED_ROOT = {"CUBE-T": "Base", "OCTA-C": "Contract", "SPLIT-1": "Split", "FLIP-1": "Flip",
                 "ONC-1": "OnCurve", "CONTRACT-1": "Split"}


@pytest.mark.parametrize("rational", [True, False])
@pytest.mark.parametrize("name", TRIANGULATIONS)
def test_fixture_drawn_and_verified(name, rational):
    inst = _inst(name, rational)
    res = draw_triangulation(inst, rational)
    assert res.trace.kind == EXPECTED_ROOT[name]
    rep = verify_output(res.drawing, inst)
    assert rep.ok, rep.failures()


@pytest.mark.parametrize("name", TRIANGULATIONS)
def test_trace_replays_to_input_edges(name):
    inst = _inst(name)
    res = draw_triangulation(inst, True)
    assert replay_edges(res.trace) == set(inst.T.edges())


def test_vertex_items_land_exactly():
    inst = _inst("SPLIT-1")
    d = draw_triangulation(inst, True).drawing
    for it, t in zip(inst.items, inst.targets):
        if isinstance(it, VertexItem):
            assert d.coords[it.v] == (0, t)


def test_halving_policy_also_verifies():
    inst = _inst("FLIP-1")
    res = draw_triangulation(inst, True, eps_policy="halve")
    assert verify_output(res.drawing, inst).ok


@pytest.mark.parametrize("seed", range(5))
def test_generated_instances(seed):
    s = gen_triangulation_instance(seed, 8 + 6 * seed)
    res = draw_triangulation(s.instance)
    rep = verify_output(res.drawing, s.instance)
    assert rep.ok, rep.failures()
    assert is_plane(res.drawing).plane and check_devillers(res.drawing, s.instance.T)


def test_sides_preserved():
    inst = _inst("CONTRACT-1")
    d = draw_triangulation(inst, True).drawing
    assert all(d.side(v) == s for v, s in inst.sides.items())
    assert inst.sides["m"] == Side.Y
