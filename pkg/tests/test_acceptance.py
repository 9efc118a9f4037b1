"""End-to-end acceptance runs.  Each criterion prints one PASS/FAIL line."""

import subprocess
import sys
import time
from collections import Counter

import numpy as np
import pytest

from freeset.agraph import (
    BoundarySpec,
    _strip_scale,
    assemble_system,
    boundary_equations,
    boundary_spec,
    derive_coefficients_from_witness,
    draw_a_graph,
    outer_shape_for_targets,
    retarget_continuation,
    solve_system,
    validate_a_graph,
)
from freeset.drawing import check_devillers, edge_intercepts, is_plane
from freeset.errors import SingularSystem
from freeset.exact import to_fraction
from freeset.harness import (
    MUTATIONS,
    fixture,
    gen_a_graph,
    gen_free_set_request,
    gen_triangulation_instance,
    random_agraph_targets,
    verify_output,
)
from freeset.pipeline import realize_free_set
from freeset.reducer import draw_triangulation

N_AGRAPHS = 100


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n{tag} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def agraphs():
    t0 = time.perf_counter()
    out = [(seed, gen_a_graph(seed, 7 + (seed * 37) % 194)) for seed in range(N_AGRAPHS)]
    return out, time.perf_counter() - t0


def _problem(seed, a, rational=False):
    y = random_agraph_targets(a, np.random.default_rng(seed), rational)
    return y, outer_shape_for_targets(a, y, rational)


def _normalized_rows(a, delta, rational):
    spec = boundary_spec(a, delta)
    c = _strip_scale(delta.values())
    nd = {v: (to_fraction(p[0]) * c, p[1]) for v, p in delta.items()}
    return boundary_equations(a, BoundarySpec(nd, spec.case, spec.e_b), rational)


def test_c1_equation_count(agraphs, report):
    graphs, gen_time = agraphs
    extra = [validate_a_graph(fixture(n).drawing) for n in ("H5", "CUBE")]
    t0 = time.perf_counter()
    bad = []
    for a in [g for _, g in graphs] + extra:
        d = a.witness
        inter = edge_intercepts(d)
        y = [inter[e] for e in a.edge_order]
        rows = boundary_equations(a, boundary_spec(a, {v: d.coords[v] for v in d.embedding.outer_face()}))
        c = assemble_system(a, derive_coefficients_from_witness(a), y, rows).counts()
        if sum(c.values()) - c.get("boundary", 0) != a.m - 4 or sum(c.values()) != a.m \
                or a.equation_budget() != a.m - 4:
            bad.append(a.m)
    dt = time.perf_counter() - t0
    ms = [g.m for _, g in graphs]
    report("C1", not bad and dt < 5 and min(ms) >= 5 and max(ms) <= 200,
           f"{len(graphs) + 2} systems, m in [{min(ms)}, {max(ms)}], {len(bad)} mismatches, "
           f"{dt:.2f}s check (+{gen_time:.1f}s shared generation)")


@pytest.fixture(scope="module")
def sweep(agraphs):
    graphs, _ = agraphs
    t0 = time.perf_counter()
    rows = []
    for seed, a in graphs:
        y, delta = _problem(seed, a)
        info = []
        try:
            d = draw_a_graph(a, y, delta, info=info)
        except Exception as exc:            # reported as a failure below
            rows.append((seed, a, y, None, None, repr(exc)))
            continue
        rows.append((seed, a, y, d, info[-1], None))
    return rows, time.perf_counter() - t0


def _agraph_output_ok(a, y, d, rel):
    if not is_plane(d).plane or not check_devillers(d, a.embedding):
        return False
    sides = a.witness.sides()
    if any(d.side(v) != sides[v] for v in a.embedding.vertices):
        return False
    inter = edge_intercepts(d)
    scale = max(1.0, max(abs(float(t)) for t in y))
    if rel == 0:
        return all(inter[e] == t for e, t in zip(a.edge_order, y))
    return all(abs(float(inter[e]) - float(t)) <= rel * scale for e, t in zip(a.edge_order, y))


def test_c2_agraph_retargeting(sweep, agraphs, report):
    rows, dt = sweep
    ok = sum(1 for _, a, y, d, _, err in rows if err is None and _agraph_output_ok(a, y, d, 1e-6))
    strategies = Counter(i.strategy for *_, i, err in rows if err is None)
    # exact mode on every fifth instance
    graphs, _ = agraphs
    exact_ok, exact_n = 0, 0
    for seed, a in graphs[::5]:
        y, delta = _problem(seed, a, rational=True)
        exact_n += 1
        try:
            d = draw_a_graph(a, y, delta, rational=True)
            exact_ok += _agraph_output_ok(a, y, d, 0)
        except Exception:
            pass
    report("C2", ok == len(rows) and dt < 30 and exact_ok == exact_n,
           f"float {ok}/{len(rows)} in {dt:.1f}s, rational {exact_ok}/{exact_n}, strategies {dict(strategies)}")


def test_c3_ordering_is_eps_strong(sweep, report):
    rows, _ = sweep
    checked, viol, worst = 0, 0, float("inf")
    for _, a, y, d, info, err in rows:
        if err is not None or info.strategy == "outer-shape":
            continue
        checked += 1
        gap = float(info.margin) - float(info.eps)
        worst = min(worst, gap)
        if gap < -1e-9:
            viol += 1
    report("C3", viol == 0 and checked > 0, f"{checked} solves, {viol} violations, worst margin-eps {worst:.3g}")


def test_c4_float_and_rational_agree(agraphs, report):
    graphs, _ = agraphs
    agree, certified, n = 0, 0, 0
    for seed, a in graphs:
        y, delta = _problem(seed, a)
        cf = derive_coefficients_from_witness(a)
        n += 1
        try:
            sf = solve_system(assemble_system(a, cf, y, _normalized_rows(a, delta, False), False))
        except SingularSystem:
            continue
        sr = solve_system(assemble_system(a, cf, y, _normalized_rows(a, delta, True), True))
        certified += sr.det_sign != 0
        sc = max(1.0, max(abs(float(v)) for v in sr.slopes))
        agree += max(abs(float(p) - float(q)) for p, q in zip(sf.slopes, sr.slopes)) <= 1e-6 * sc
    report("C4", agree == n and certified == n, f"{agree}/{n} agree within 1e-6, det != 0 certified {certified}/{n}")


def test_c5_continuation(agraphs, report):
    graphs, _ = agraphs
    steps, bad, matched, compared, done = 0, 0, 0, 0, 0
    for seed, a in graphs[:25]:
        y, delta = _problem(seed, a)
        # a capped step forces at least eight accepted steps per path
        sol, trace = retarget_continuation(a, delta, y, max_step=0.125)
        done += 1
        steps += len(trace.steps)
        bad += sum(1 for s in trace.steps if s.margin < trace.eps_star)
        try:
            direct = solve_system(assemble_system(a, derive_coefficients_from_witness(a), y,
                                                  _normalized_rows(a, delta, False)))
        except SingularSystem:
            continue
        compared += 1
        sc = max(1.0, max(abs(v) for v in direct.slopes))
        matched += max(abs(p - q) for p, q in zip(sol.slopes, direct.slopes)) <= 1e-6 * sc
    report("C5", done == 25 and bad == 0 and matched == compared,
           f"{done} paths, {steps} accepted steps, {bad} below eps*, final vs direct {matched}/{compared}")


def test_c6_triangulation_pipeline(report):
    t0 = time.perf_counter()
    hist, ok, ns = Counter(), 0, []
    for seed in range(50):
        n = 4 + (seed * 29) % 147
        ns.append(n)
        s = gen_triangulation_instance(seed, n)
        res = draw_triangulation(s.instance)
        ok += verify_output(res.drawing, s.instance).ok
        hist.update(res.trace.histogram())
    dt = time.perf_counter() - t0
    kinds = {"Split", "Contract", "Flip", "OnCurve", "Base"}
    missing = sorted(k for k in kinds if hist[k] == 0)
    report("C6", ok == 50 and not missing and dt < 120 and max(ns) <= 150,
           f"{ok}/50 verified, n <= {max(ns)}, histogram {dict(sorted(hist.items()))}, {dt:.1f}s")


def test_c7_free_set(report):
    ok = 0
    for seed in range(20):
        req = gen_free_set_request(seed, 2 + seed % 9)
        d = realize_free_set(req).drawing
        targets = sorted((float(x), float(y)) for x, y in req.targets)
        placed = sorted((float(d.coords[v][0]), float(d.coords[v][1])) for v in req.S)
        close = all(abs(p[0] - q[0]) <= 1e-6 * max(1, abs(q[0])) and abs(p[1] - q[1]) <= 1e-6 * max(1, abs(q[1]))
                    for p, q in zip(placed, targets))
        ok += close and is_plane(d).plane and check_devillers(d, req.witness.embedding)
    report("C7", ok == 20, f"{ok}/20 witnesses with |S| in [2, 10] realized")


def test_c8_fault_injection(report):
    flagged, total = 0, 0
    for seed in range(10):
        s = gen_triangulation_instance(100 + seed, 12 + 3 * seed)
        d = draw_triangulation(s.instance).drawing
        rng = np.random.default_rng(seed)
        for name in sorted(MUTATIONS):
            total += 1
            flagged += not verify_output(MUTATIONS[name](d, s.instance, rng), s.instance).ok
    report("C8", flagged == total == 30, f"{flagged}/{total} mutated outputs flagged")


def _cli(args, cwd):
    r = subprocess.run([sys.executable, "-m", "freeset", *args], cwd=cwd, capture_output=True)
    assert r.returncode == 0, r.stderr.decode()


STEPS = [
    ["gen", "--kind", "agraph", "--seed", "7", "--size", "40", "-o", "ga.json"],
    ["agraph", "ga.json", "-o", "a.json"],
    ["render", "a.json", "--labels", "-o", "a.svg"],
    ["gen", "--kind", "tri", "--seed", "5", "--size", "30", "-o", "gt.json"],
    ["draw", "gt.json", "--emit-trace", "-o", "t.json"],
    ["render", "t.json", "-o", "t.svg"],
    ["free", "hex.json", "--points", "pts.json", "--rational", "-o", "f.json"],
    ["render", "f.json", "-o", "f.svg"],
]


def test_c9_determinism(tmp_path, report):
    runs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        d.mkdir()
        (d / "hex.json").write_text(fixture("HEX-1").document().dumps())
        (d / "pts.json").write_text("[[1, 2], [3, -1]]")
        for step in STEPS:
            _cli(step, d)
        runs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    diff = sorted(k for k in runs[0] if runs[0][k] != runs[1].get(k))
    report("C9", not diff and len(runs[0]) == 10,
           f"{len(runs[0])} files compared byte for byte, differing: {diff or 'none'}")
