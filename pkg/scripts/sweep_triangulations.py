"""Seed sweep over random triangulation instances.  Prints one JSON line per
instance and a final summary with the reduction-step histogram."""

import argparse
import json
import time
from collections import Counter
from dataclasses import asdict, dataclass

from freeset.harness import gen_triangulation_instance, verify_output
from freeset.reducer import draw_triangulation


@dataclass
class SweepConfig:
    seeds: int = 50
    max_n: int = 150
    rational: bool = False
    eps_policy: str = "window"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--rational", action="store_true")
    ap.add_argument("--eps-policy", choices=("window", "halve"), default=SweepConfig.eps_policy)
    cfg = SweepConfig(**vars(ap.parse_args()))

    total = Counter()
    failures = 0
    for seed in range(cfg.seeds):
        n = 4 + (seed * 29) % (cfg.max_n - 3)
        s = gen_triangulation_instance(seed, n, cfg.rational)
        t0 = time.perf_counter()
        res = draw_triangulation(s.instance, cfg.rational, eps_policy=cfg.eps_policy)
        dt = time.perf_counter() - t0
        rep = verify_output(res.drawing, s.instance)
        failures += not rep.ok
        hist = res.trace.histogram()
        total.update(hist)
        print(json.dumps({"seed": seed, "n": n, "ok": rep.ok, "failures": rep.failures(),
                          "depth": res.trace.depth(), "steps": hist, "seconds": round(dt, 4)},
                         sort_keys=True), flush=True)
    print(json.dumps({"summary": {"config": asdict(cfg), "failures": failures, "histogram": dict(total)}},
                     sort_keys=True))


if __name__ == "__main__":
    main()
