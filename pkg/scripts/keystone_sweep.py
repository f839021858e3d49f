"""Sweep every registered identity over seeded points and write a JSON report.

    python3 scripts/keystone_sweep.py --seeds 10 --tol 1e-15 --out keystone.json
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from mpmath import mpf, nstr

from qcf import catalog, harness


@dataclass(frozen=True)
class SweepConfig:
    seeds: int = 10
    tol: str = "1e-15"
    precision: int = 50
    workers: int = 1
    out: str | None = None


def run(cfg: SweepConfig) -> list:
    start = time.perf_counter()
    results = []
    for id in catalog.ids():
        s = harness.sweep(id, cfg.seeds, mpf(cfg.tol), precision=cfg.precision, workers=cfg.workers)
        results.append(s)
        worst = "-" if s.worst_rel_diff is None else nstr(s.worst_rel_diff, 3)
        print(f"{id:<18} {s.pass_rate:6.1%}  worst {worst:<10} {s.wall_time:6.2f}s", flush=True)
    total = sum(len(s.reports) for s in results)
    passed = sum(r.passed for s in results for r in s.reports)
    print(f"\n{passed}/{total} verifications passed in {time.perf_counter() - start:.1f}s")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(harness.to_json([s.to_dict() for s in results], "sweep", cfg.precision))
        print(f"report written to {cfg.out}")
    return results


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=SweepConfig.seeds)
    p.add_argument("--tol", default=SweepConfig.tol)
    p.add_argument("--precision", type=int, default=SweepConfig.precision)
    p.add_argument("--workers", type=int, default=SweepConfig.workers)
    p.add_argument("--out")
    cfg = SweepConfig(**vars(p.parse_args(argv)))
    results = run(cfg)
    return 0 if all(s.pass_rate == 1.0 for s in results) else 1


if __name__ == "__main__":
    sys.exit(main())
