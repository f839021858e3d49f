"""Convergence of the modified approximants on the circle |az/q| = 1.

For each seeded point, prints |S_n(-az/q) - series ratio| at a few n, so the
(unstated) rate can be read off; the last column is the fitted decay factor
per partial quotient.

    python3 scripts/thm25ii_residuals.py --seeds 5
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from mpmath import exp, log, mpf, nstr

from qcf import catalog
from qcf.cfengine import modified_approximant
from qcf.precision import working_precision

CHECKPOINTS = (10, 20, 40, 80, 160)


@dataclass(frozen=True)
class ResidualConfig:
    seeds: int = 5
    precision: int = 50


def residuals(seed: int):
    rec = catalog.get("thm25ii")
    point = catalog.sample_point("thm25ii", seed)
    target = catalog.build_side(rec.lhs, point, mpf("1e-45")).value
    cf = catalog.build_side(rec.rhs, point)
    w = rec.modification(point)
    return point, [abs(modified_approximant(cf, n, w) - target) / max(1, abs(target)) for n in CHECKPOINTS]


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=ResidualConfig.seeds)
    p.add_argument("--precision", type=int, default=ResidualConfig.precision)
    cfg = ResidualConfig(**vars(p.parse_args(argv)))
    with working_precision(cfg.precision):
        header = "  ".join(f"n={n:<8}" for n in CHECKPOINTS)
        print(f"seed  |q|    {header}  rate")
        for seed in range(1, cfg.seeds + 1):
            point, res = residuals(seed)
            # Residuals near the target's own tolerance carry no rate information.
            usable = [(n, r) for n, r in zip(CHECKPOINTS, res) if r > mpf("1e-42")]
            rate = "-"
            if len(usable) >= 2:
                (n0, r0), (n1, r1) = usable[0], usable[-1]
                rate = nstr(exp((log(r1) - log(r0)) / (n1 - n0)), 3)
            cells = "  ".join(f"{nstr(r, 2):<10}" for r in res)
            print(f"{seed:<4}  {nstr(abs(point['q']), 2):<5}  {cells}  {rate}")


if __name__ == "__main__":
    main()
