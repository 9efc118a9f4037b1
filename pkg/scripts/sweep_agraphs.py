"""Seed sweep over generated A-graphs: draw each one with random crossing
targets and record solver strategy, ordering margin and timing as JSON lines."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from freeset.agraph import draw_a_graph, outer_shape_for_targets
from freeset.drawing import check_devillers, edge_intercepts, is_plane
from freeset.harness import gen_a_graph, random_agraph_targets


@dataclass
class SweepConfig:
    seeds: int = 100
    min_size: int = 7
    max_size: int = 200
    rational: bool = False


def run(cfg: SweepConfig):
    span = cfg.max_size - cfg.min_size + 1
    for seed in range(cfg.seeds):
        size = cfg.min_size + (seed * 37) % span
        a = gen_a_graph(seed, size)
        y = random_agraph_targets(a, np.random.default_rng(seed), cfg.rational)
        delta = outer_shape_for_targets(a, y, cfg.rational)
        info = []
        t0 = time.perf_counter()
        d = draw_a_graph(a, y, delta, rational=cfg.rational, info=info)
        dt = time.perf_counter() - t0
        inter = edge_intercepts(d)
        err = max(abs(float(inter[e]) - float(t)) for e, t in zip(a.edge_order, y))
        yield {"seed": seed, "m": a.m, "n0": a.n0, "case": a.outer_case.value,
               "strategy": info[-1].strategy, "margin": float(info[-1].margin), "eps": float(info[-1].eps),
               "max_crossing_error": err, "plane": is_plane(d).plane,
               "embedding": check_devillers(d, a.embedding), "seconds": round(dt, 4)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for k, v in asdict(SweepConfig()).items():
        flag = "--" + k.replace("_", "-")
        if isinstance(v, bool):
            ap.add_argument(flag, action="store_true")
        else:
            ap.add_argument(flag, type=type(v), default=v)
    cfg = SweepConfig(**vars(ap.parse_args()))
    for row in run(cfg):
        print(json.dumps(row, sort_keys=True), flush=True)


if __name__ == "__main__":
    main()
