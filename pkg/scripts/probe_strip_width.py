"""How wide can the root strip get before the images start losing simplicity?

Simplicity is proven only up to total width |h|/2.  This sweeps the half-width
r past that point and counts trials whose image has a repeated root, keeping
containment as a sanity check.  Nothing is asserted.
"""
import argparse
import json
from dataclasses import asdict, dataclass
from typing import Tuple

from linedelta.verify import verify_strip_preservation


@dataclass
class ProbeConfig:
    h: float = 1.0
    theta: float = 0.0
    half_widths: Tuple[float, ...] = (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
    trials: int = 200
    seed: int = 0
    workers: int = 1


def probe(cfg: ProbeConfig) -> dict:
    rows = []
    for r in cfg.half_widths:
        # ask for simplicity at every width, so failures show where it breaks
        rep = verify_strip_preservation(cfg.theta, cfg.h, r, cfg.trials, seed=cfg.seed,
                                        workers=cfg.workers, simplicity_width=float("inf"))
        kinds = [k for f in rep.failures for k in f.witness]
        rows.append({"half_width": r, "width_over_h": 2 * r / cfg.h,
                     "containment_failures": kinds.count("containment"),
                     "simplicity_failures": kinds.count("simplicity")})
    return {"config": asdict(cfg), "rows": rows}


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", type=float, default=1.0)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(json.dumps(probe(ProbeConfig(h=args.h, trials=args.trials, seed=args.seed,
                                       workers=args.workers)), indent=2))
