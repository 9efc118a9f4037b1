from fractions import Fraction

import numpy as np
import pytest

from conftest import drawing, k4_centered
from freeset.agraph import (
    OuterCase,
    SlopeSystem,
    assemble_system,
    boundary_equations,
    boundary_spec,
    check_ordering,
    default_coefficients,
    derive_coefficients_from_witness,
    draw_a_graph,
    outer_shape_for_targets,
    precedence_relation,
    reconstruct_drawing,
    retarget_continuation,
    solve_system,
    validate_a_graph,
)
from freeset.drawing import check_devillers, edge_intercepts, is_plane
from freeset.errors import (
    IncompatibleOuterShape,
    InconsistentConcurrency,
    NotAGraph,
    SingularSystem,
    TargetsNotIncreasing,
)
from freeset.harness import fixture, gen_a_graph, random_agraph_targets


def _agraph(name):
    return validate_a_graph(fixture(name).drawing)


def _witness_inputs(a, rational=True):
    d = a.witness
    y = [edge_intercepts(d)[e] for e in a.edge_order]
    outer = {v: d.coords[v] for v in d.embedding.outer_face()}
    spec = boundary_spec(a, outer)
    return y, outer, boundary_equations(a, spec, rational)


def _slope(d, e):
    (x0, y0), (x1, y1) = d.coords[e[0]], d.coords[e[1]]
    return (y1 - y0) / (x1 - x0)


# --- validation ---------------------------------------------------------------

def test_h5_classification():
    a = _agraph("H5")
    assert (a.m, a.n0, a.f3, a.f4) == (8, 2, 4, 1)
    assert a.outer_case == OuterCase.TRIANGLE_BOTTOM
    assert a.equation_budget() == a.m - 4


def test_cube_classification():
    a = _agraph("CUBE")
    assert (a.m, a.n0, a.f3, a.f4) == (12, 0, 0, 6)
    assert a.outer_case == OuterCase.QUAD


def test_all_vertices_left_is_not_an_agraph():
    d = k4_centered()
    shifted = d.with_coords({v: (p[0] - 10, p[1]) for v, p in d.coords.items()})
    with pytest.raises(NotAGraph):
        validate_a_graph(shifted)


def test_convex_quad_face_rejected():
    d = drawing({"a": (-1, 0), "b": (0, -1), "c": (1, 0), "d": (0, 1)}, ["ab", "bc", "cd", "da"])
    with pytest.raises(NotAGraph):
        validate_a_graph(d)


# --- precedence and coefficients -------------------------------------------------

def test_precedence_counts():
    # every side vertex of degree k contributes k(k-1)/2 pairs
    assert len(precedence_relation(_agraph("CUBE"))) == 24
    assert len(precedence_relation(_agraph("H5"))) == 12


def test_witness_slopes_respect_precedence():
    a = _agraph("CUBE")
    d = a.witness
    s = [_slope(d, e) for e in a.edge_order]
    assert check_ordering(s, precedence_relation(a), 0).ordered
    neg = [-v for v in s]
    assert check_ordering(neg, precedence_relation(a), 0).status == "Violated"


def test_default_coefficients_are_evenly_spaced():
    a = gen_a_graph(1, 40)
    dc = default_coefficients(a)
    sizes = {v: len(a.bundles(v)[1]) for v in a.y_vertices()}
    v = max(sizes, key=sizes.get)
    l = sizes[v]
    assert l >= 3
    assert dc.right[v] == tuple(Fraction(i, l - 1) for i in range(1, l - 1))


def test_witness_coefficients_lie_in_unit_interval():
    a = gen_a_graph(1, 40)
    wc = derive_coefficients_from_witness(a)
    for v in a.y_vertices():
        assert all(0 < x < 1 for x in wc.right[v])
        assert list(wc.right[v]) == sorted(wc.right[v])


# --- boundary rows and the system ---------------------------------------------

def test_cube_boundary_uses_outer_slopes():
    a = _agraph("CUBE")
    _, _, rows = _witness_inputs(a)
    for i, h in rows:
        assert h == _slope(a.witness, a.edge_order[i])
    assert sorted(i for i, _ in rows) == a.outer_edges()


def test_h5_boundary_extra_edge():
    a = _agraph("H5")
    _, _, rows = _witness_inputs(a)
    hs = dict(rows)
    outer = a.outer_edges()
    (eb,) = [i for i in hs if i not in outer]
    assert a.edge_order[eb] == ("q", "v")
    assert hs[eb] == max(hs[i] for i in outer) + 1


@pytest.mark.parametrize("name,conc", [("CUBE", 8), ("H5", 4)])
def test_row_counts(name, conc):
    a = _agraph(name)
    y, _, rows = _witness_inputs(a)
    sysm = assemble_system(a, derive_coefficients_from_witness(a), y, rows, rational=True)
    c = sysm.counts()
    assert c.get("concurrency") == conc and c.get("boundary") == 4
    assert sum(c.values()) == a.m


def test_concurrency_row_coefficients():
    a = _agraph("CUBE")
    y = [Fraction(i) for i in range(a.m)]
    _, _, rows = _witness_inputs(a)
    sysm = assemble_system(a, default_coefficients(a), y, rows, rational=True)
    r, tag = next((r, t) for r, t in zip(sysm.rows, sysm.tags) if t[0] == "concurrency")
    i, j, k = tag[2:]
    assert r == {i: y[j] - y[k], j: y[k] - y[i], k: y[i] - y[j]}
    assert sum(r.values()) == 0


def test_concurrency_row_for_crossings_0_1_2():
    a = _agraph("H5")
    y = [Fraction(v) for v in (0, 0, 0, 1, 2, 2, 2, 3)]
    _, _, rows = _witness_inputs(a)
    sysm = assemble_system(a, default_coefficients(a), y, rows, rational=True)
    for r, t in zip(sysm.rows, sysm.tags):
        if t[0] == "concurrency" and [y[x] for x in t[2:]] == [0, 1, 2]:
            assert [r[x] for x in t[2:]] == [-1, 2, -1]
            break
    else:
        # q is a right vertex so its anchor order is reversed: 2, 1, 0
        r, t = next((r, t) for r, t in zip(sysm.rows, sysm.tags) if t[0] == "concurrency" and t[1] == "q")
        assert sorted(r.values()) == [-1, -1, 2]


@pytest.mark.parametrize("rational", [False, True])
def test_witness_data_reproduces_cube(rational):
    a = _agraph("CUBE")
    y, _, rows = _witness_inputs(a, rational)
    sol = solve_system(assemble_system(a, derive_coefficients_from_witness(a), y, rows, rational))
    want = [_slope(a.witness, e) for e in a.edge_order]
    if rational:
        assert list(sol.slopes) == want and sol.det_sign != 0
    else:
        assert np.allclose(sol.slopes, [float(w) for w in want], rtol=1e-12, atol=1e-12)
    d = reconstruct_drawing(a, sol, y, rational)
    for v, p in a.witness.coords.items():
        assert abs(float(d.coords[v][0]) - float(p[0])) < 1e-9
        assert abs(float(d.coords[v][1]) - float(p[1])) < 1e-9


def test_h5_witness_crossings_with_synthetic_extra_slope():
    # the extra boundary slope differs from the witness, so the drawing moves
    # but keeps every crossing
    a = _agraph("H5")
    y, _, rows = _witness_inputs(a)
    sol = solve_system(assemble_system(a, derive_coefficients_from_witness(a), y, rows, True))
    d = reconstruct_drawing(a, sol, y, True)
    assert is_plane(d).plane and check_devillers(d, a.embedding)
    inter = edge_intercepts(d)
    assert [inter[e] for e in a.edge_order] == y


def test_duplicated_row_is_singular():
    a = _agraph("CUBE")
    y, _, rows = _witness_inputs(a, rational=False)
    sysm = assemble_system(a, default_coefficients(a), y, rows)
    bad = SlopeSystem(sysm.rows[:-1] + (sysm.rows[0],), sysm.rhs[:-1] + (sysm.rhs[0],), sysm.tags, sysm.m)
    with pytest.raises(SingularSystem):
        solve_system(bad)
    exact = SlopeSystem(bad.rows, bad.rhs, bad.tags, bad.m, rational=True)
    with pytest.raises(SingularSystem):
        solve_system(exact)


def test_non_concurrent_slopes_detected():
    a = _agraph("CUBE")
    y, _, _ = _witness_inputs(a)
    s = [_slope(a.witness, e) for e in a.edge_order]
    s[3] += Fraction(1, 1000)
    with pytest.raises(InconsistentConcurrency):
        reconstruct_drawing(a, s, y, rational=True, check=False)


def test_mirror_symmetry():
    a = _agraph("CUBE")
    d = a.witness
    mirror = drawing({v: (-p[0], p[1]) for v, p in d.coords.items()}, list(a.edge_order))
    b = validate_a_graph(mirror)
    y, _, rows = _witness_inputs(b)
    sol = solve_system(assemble_system(b, derive_coefficients_from_witness(b), y, rows, rational=True))
    orig = {e: _slope(d, e) for e in a.edge_order}
    for e, s in sol.by_edge(b).items():
        assert s == -orig[e]


# --- drivers ------------------------------------------------------------------

def test_h5_drawn_to_integer_targets():
    a = _agraph("H5")
    y = [0, 0, 0, 1, 2, 2, 2, 3]
    delta = outer_shape_for_targets(a, y, rational=True)
    d = draw_a_graph(a, y, delta, rational=True)
    assert d.coords["v"] == (0, 0) and d.coords["u"] == (0, 2)
    inter = edge_intercepts(d)
    assert inter[("p", "q")] == 1 and inter[("p", "r")] == 3
    assert is_plane(d).plane and check_devillers(d, a.embedding)


def test_triangle_with_three_edges_returns_outer_shape():
    d = drawing({"g": (0, 0), "l": (-1, 2), "r": (1, 1)}, ["gl", "gr", "lr"])
    a = validate_a_graph(d)
    y = [0, 0, 3]
    delta = outer_shape_for_targets(a, y, rational=True)
    out = draw_a_graph(a, y, delta, rational=True)
    assert out.coords == {v: tuple(p) for v, p in delta.items()}


def test_decreasing_targets_rejected():
    a = _agraph("H5")
    y = [0, 0, 0, 2, 1, 1, 1, 3]
    with pytest.raises(TargetsNotIncreasing):
        draw_a_graph(a, y, {v: a.witness.coords[v] for v in a.embedding.outer_face()})


def test_outer_shape_must_match_targets():
    a = _agraph("CUBE")
    rng = np.random.default_rng(0)
    y = random_agraph_targets(a, rng, rational=True)
    wrong = {v: a.witness.coords[v] for v in a.embedding.outer_face()}
    with pytest.raises(IncompatibleOuterShape):
        draw_a_graph(a, y, wrong, rational=True)


@pytest.mark.parametrize("seed", range(4))
def test_cube_random_targets(seed):
    a = _agraph("CUBE")
    y = random_agraph_targets(a, np.random.default_rng(seed), rational=True)
    try:
        delta = outer_shape_for_targets(a, y, rational=True)
    except IncompatibleOuterShape:
        pytest.skip("targets incompatible with the quad outer face")
    d = draw_a_graph(a, y, delta, rational=True)
    inter = edge_intercepts(d)
    assert [inter[e] for e in a.edge_order] == list(y)


def test_continuation_stretched_h5():
    a = _agraph("H5")
    y = [Fraction(10) * v for v in (0, 0, 0, 1, 2, 2, 2, 3)]
    delta = outer_shape_for_targets(a, y, rational=True)
    sol, trace = retarget_continuation(a, delta, y, rational=True)
    assert trace.steps and trace.steps[-1].t == 1.0
    assert all(s.margin >= trace.eps_star for s in trace.steps)


def test_continuation_across_large_gaps():
    a = _agraph("CUBE")
    y = random_agraph_targets(a, np.random.default_rng(3), rational=True)
    y = [v + (10 ** 6 if i >= a.m // 2 else 0) for i, v in enumerate(y)]
    try:
        delta = outer_shape_for_targets(a, y, rational=True)
    except IncompatibleOuterShape:
        pytest.skip("targets incompatible with the quad outer face")
    sol, trace = retarget_continuation(a, delta, y, rational=True)
    assert check_ordering(sol, precedence_relation(a), 0).ordered


@pytest.mark.parametrize("seed", range(6))
def test_generated_agraphs_draw(seed):
    a = gen_a_graph(seed, 10 + 7 * seed)
    y = random_agraph_targets(a, np.random.default_rng(seed))
    delta = outer_shape_for_targets(a, y)
    info = []
    d = draw_a_graph(a, y, delta, info=info)
    assert is_plane(d).plane and check_devillers(d, a.embedding)
    inter = edge_intercepts(d)
    assert max(abs(float(inter[e]) - float(t)) for e, t in zip(a.edge_order, y)) < 1e-6 * max(1, float(y[-1]))
