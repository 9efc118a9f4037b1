"""Realize random collinear sets on random point sets and report how far the
perturbation search had to shrink before the drawing stayed plane."""

import argparse
import json
from dataclasses import dataclass

from freeset.drawing import check_devillers, is_plane
from freeset.harness import gen_free_set_request
from freeset.pipeline import realize_free_set


@dataclass
class SweepConfig:
    seeds: int = 20
    max_k: int = 10
    rational: bool = False


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    ap.add_argument("--max-k", type=int, default=SweepConfig.max_k)
    ap.add_argument("--rational", action="store_true")
    cfg = SweepConfig(**vars(ap.parse_args()))
    for seed in range(cfg.seeds):
        k = 2 + seed % (cfg.max_k - 1)
        req = gen_free_set_request(seed, k)
        res = realize_free_set(req, rational=cfg.rational)
        d = res.drawing
        err = max(abs(float(d.coords[v][i]) - float(p[i]))
                  for v, p in res.extra["assignment"].items() for i in (0, 1))
        delta = res.extra.get("delta")
        print(json.dumps({"seed": seed, "k": k, "n": d.embedding.n(), "max_point_error": err,
                          "delta": None if delta is None else str(delta),
                          "halvings": len(res.extra.get("delta_history", [])),
                          "plane": is_plane(d).plane,
                          "embedding": check_devillers(d, req.witness.embedding)}, sort_keys=True), flush=True)


if __name__ == "__main__":
    main()
