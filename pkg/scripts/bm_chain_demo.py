"""Run the four Theorem 4.1 chains at one point and show what each step freezes.

    python3 scripts/bm_chain_demo.py --q 0.2 --a 0.3 --b 0.4 --lam 0.5 --steps 5
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from mpmath import mpf, nstr

from qcf.bauermuir import PRESETS, bm_chain, tail_offsets
from qcf.cfengine import evaluate
from qcf.precision import working_precision
from qcf.qseries import ParameterPoint


@dataclass(frozen=True)
class DemoConfig:
    q: str = "0.2"
    a: str = "0.3"
    b: str = "0.4"
    lam: str = "0.5"
    steps: int = 5
    precision: int = 50


def show(name: str, point: ParameterPoint, steps: int) -> None:
    preset = PRESETS[name]
    source, target = preset.build(point, "source"), preset.build(point, "target")
    chained, report = bm_chain(source, preset.w_family(point), steps)
    print(f"\n{name}: {preset.source} -> {preset.target}   ({preset.description})")
    print(f"  {'k':>2}  {'frozen b_k':>22}  {'target b_k':>22}  {'frozen a_k+1':>22}  {'target a_k+1':>22}")
    for k, (b, a) in enumerate(report.prefix):
        print(f"  {k:>2}  {nstr(b.real, 15):>22}  {nstr(target.b(k).real, 15):>22}"
              f"  {nstr(a.real, 15):>22}  {nstr(target.a(k + 1).real, 15):>22}")
    tol = mpf("1e-40")
    offsets = tail_offsets(report, target, tol)
    print("  tail offsets f_n:", ", ".join(nstr(f.real, 8) for f in offsets))
    drift = abs(evaluate(chained, tol).value - evaluate(source, tol).value)
    print(f"  |value(chained) - value(source)| = {nstr(drift, 3)}")


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for key, default in vars(DemoConfig()).items():
        p.add_argument(f"--{key}", type=type(default), default=default)
    cfg = DemoConfig(**vars(p.parse_args(argv)))
    with working_precision(cfg.precision):
        point = ParameterPoint({"q": mpf(cfg.q), "a": mpf(cfg.a), "b": mpf(cfg.b), "lam": mpf(cfg.lam)})
        for name in PRESETS:
            show(name, point, cfg.steps)


if __name__ == "__main__":
    main()
