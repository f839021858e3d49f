"""Verification engine: evaluate both sides of an identity, sweep seeds,
cross-check the four Theorem 4.1 fractions, check Bauer-Muir chains, and
serialize everything as versioned JSON with decimal-string numbers."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from mpmath import mp, mpc, mpf, nstr

from . import catalog
from .bauermuir import (
    bauer_muir,
    bm_approximant_check,
    bm_chain,
    get_preset,
    tail_offsets,
    theorem41_excluded,
)
from .cfengine import DIVERGED, evaluate, evaluate_modified, separate_limits
from .errors import BudgetExhausted, DomainError, NoConvergence, SpecError
from .families import F_FAMILY
from .precision import working_precision
from .qseries import ParameterPoint

SCHEMA = "qcf.report/1"
ERROR_FLAGS = {"domain-violation", "diverged"}
# Inner evaluations run this much tighter than the comparison tolerance.
INNER_FACTOR = mpf("1e-3")


@dataclass(frozen=True)
class Budget:
    max_terms: int = 10_000
    max_quotients: int = 2_000
    wall_time: float = 30.0


@dataclass
class VerificationReport:
    id: str
    point: ParameterPoint
    lhs: mpc | None
    rhs: mpc | None
    abs_diff: mpf | None
    rel_diff: mpf | None
    n_terms: int
    n_quotients: int
    passed: bool
    flags: list = field(default_factory=list)
    tol: mpf = mpf(0)
    precision: int = 0
    seed: int | None = None
    message: str = ""

    def to_dict(self) -> dict:
        d = self.precision
        return {
            "id": self.id,
            "seed": self.seed,
            "point": {k: _num(v, d) for k, v in self.point.items()},
            "lhs": _num(self.lhs, d),
            "rhs": _num(self.rhs, d),
            "abs_diff": _num(self.abs_diff, d),
            "rel_diff": _num(self.rel_diff, d),
            "n_terms": self.n_terms,
            "n_quotients": self.n_quotients,
            "pass": self.passed,
            "flags": list(self.flags),
            "tol": _num(self.tol, d),
            "precision": self.precision,
            "message": self.message,
        }


def rel_diff(x, y) -> mpf:
    return abs(x - y) / max(abs(x), abs(y), 1)


def _num(x, digits: int):
    """Decimal string with ``digits`` significant digits; complex values
    become {"re": ..., "im": ...}."""
    if x is None:
        return None
    x = mpc(x)
    if x.imag == 0:
        return nstr(x.real, digits)
    return {"re": nstr(x.real, digits), "im": nstr(x.imag, digits)}


class _Clock:
    def __init__(self, budget: Budget, what: str):
        self.start = time.perf_counter()
        self.budget = budget
        self.what = what

    def check(self):
        if time.perf_counter() - self.start > self.budget.wall_time:
            raise BudgetExhausted(f"{self.what}: wall-time cap of {self.budget.wall_time}s exceeded")


def _evaluate_side(rec, side, point, inner, budget, flags, check_separate=False):
    """Return (value, n_terms, n_quotients) for one side."""
    built = catalog.build_side(side, point, inner, budget.max_terms)
    if side.kind == "value":
        return built.value, built.terms_used, 0
    if rec.modification is not None:
        w = rec.modification(point)
        report = evaluate_modified(built, lambda n: w, inner, budget.max_quotients)
    else:
        report = evaluate(built, inner, budget.max_quotients)
    if "terminated" in report.flags and "terminated-cf" not in flags:
        flags.append("terminated-cf")
    if check_separate and separate_limits(built, inner, budget.max_quotients).separate:
        flags.append("separate-limits-found")
    if report.value is DIVERGED:
        flags.append("diverged")
        return None, 0, report.n_used
    return report.value, 0, report.n_used


def verify(id: str, point, tol=mpf("1e-15"), budget: Budget | None = None, precision: int | None = None,
           seed: int | None = None, check_separate: bool = False) -> VerificationReport:
    """Evaluate both sides of identity ``id`` at ``point`` and compare.

    Points outside the identity's domain are reported with flag
    "domain-violation" rather than raised.
    """
    rec = catalog.get(id)
    budget = budget or Budget()
    with working_precision(precision) as dps:
        tol = mpf(tol)
        point = point if isinstance(point, ParameterPoint) else ParameterPoint(point)
        missing = [s for s in rec.params if s not in point]
        if missing:
            raise ValueError(f"{id} needs parameter(s) {', '.join(missing)}")
        base = dict(id=id, point=point, tol=tol, precision=dps, seed=seed)
        bad = rec.violations(point)
        if bad:
            return VerificationReport(lhs=None, rhs=None, abs_diff=None, rel_diff=None, n_terms=0, n_quotients=0,
                                      passed=False, flags=["domain-violation"],
                                      message="violates " + "; ".join(bad), **base)
        clock = _Clock(budget, id)
        inner = tol * INNER_FACTOR
        flags: list = []
        values, terms, quotients = [], 0, 0
        message = ""
        try:
            for side in (rec.lhs, rec.rhs):
                value, t, nq = _evaluate_side(rec, side, point, inner, budget, flags, check_separate)
                values.append(value)
                terms += t
                quotients += nq
                clock.check()
        except (DomainError, SpecError, ZeroDivisionError) as exc:
            flags.append("domain-violation")
            message = str(exc)
        except NoConvergence as exc:
            flags.append("diverged")
            message = str(exc)
        if len(values) < 2 or any(v is None for v in values):
            lhs = values[0] if values else None
            rhs = values[1] if len(values) > 1 else None
            return VerificationReport(lhs=lhs, rhs=rhs, abs_diff=None, rel_diff=None, n_terms=terms,
                                      n_quotients=quotients, passed=False, flags=flags, message=message, **base)
        lhs, rhs = values
        rd = rel_diff(lhs, rhs)
        passed = rd < tol and not (set(flags) & ERROR_FLAGS)
        return VerificationReport(lhs=lhs, rhs=rhs, abs_diff=abs(lhs - rhs), rel_diff=rd, n_terms=terms,
                                  n_quotients=quotients, passed=passed, flags=flags, message=message, **base)


def verify_seed(id: str, seed: int, tol=mpf("1e-15"), budget: Budget | None = None, precision: int | None = None,
                real_q: bool = False) -> VerificationReport:
    """Sample the point for (id, seed) at the working precision, then verify."""
    with working_precision(precision) as dps:
        point = catalog.sample_point(id, seed, real_q=real_q)
        return verify(id, point, tol, budget, dps, seed=seed)


@dataclass
class SweepReport:
    id: str
    reports: list
    wall_time: float
    tol: mpf

    @property
    def pass_rate(self) -> float:
        return sum(r.passed for r in self.reports) / len(self.reports) if self.reports else 0.0

    @property
    def worst_rel_diff(self):
        diffs = [r.rel_diff for r in self.reports if r.rel_diff is not None]
        return max(diffs) if diffs else None

    def to_dict(self) -> dict:
        d = self.reports[0].precision if self.reports else mp.dps
        return {
            "id": self.id,
            "n_seeds": len(self.reports),
            "pass_rate": self.pass_rate,
            "worst_rel_diff": _num(self.worst_rel_diff, d),
            "wall_time": round(self.wall_time, 3),
            "reports": [r.to_dict() for r in self.reports],
        }


def _sweep_job(args):
    id, seed, tol, budget, precision, real_q = args
    with working_precision(precision):
        try:
            return verify_seed(id, seed, mpf(tol), budget, precision, real_q)
        except BudgetExhausted as exc:
            point = catalog.sample_point(id, seed, real_q=real_q)
            return VerificationReport(id=id, point=point, lhs=None, rhs=None, abs_diff=None, rel_diff=None,
                                      n_terms=0, n_quotients=0, passed=False, flags=["budget-exhausted"],
                                      tol=mpf(tol), precision=precision, seed=seed, message=str(exc))


def sweep(id: str, n_seeds: int = 10, tol=mpf("1e-15"), budget: Budget | None = None,
          precision: int | None = None, real_q: bool = False, workers: int = 1, first_seed: int = 1) -> SweepReport:
    """One report per seed ``first_seed .. first_seed + n_seeds - 1``, sorted by seed."""
    catalog.get(id)
    budget = budget or Budget()
    start = time.perf_counter()
    with working_precision(precision) as dps:
        jobs = [(id, s, str(mpf(tol)), budget, dps, real_q) for s in range(first_seed, first_seed + n_seeds)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(_sweep_job, jobs))
        else:
            reports = [_sweep_job(j) for j in jobs]
        reports.sort(key=lambda r: r.seed)
        return SweepReport(id, reports, time.perf_counter() - start, mpf(tol))


# -- Theorem 4.1 cross-check --------------------------------------------------------


@dataclass
class CrossCheckReport:
    values: dict
    pairwise: dict
    max_deviation: mpf
    passed: bool
    flags: dict = field(default_factory=dict)
    precision: int = 0

    def to_dict(self) -> dict:
        d = self.precision
        return {
            "values": {k: _num(v, d) for k, v in self.values.items()},
            "pairwise": {f"{a}-{b}": _num(x, d) for (a, b), x in self.pairwise.items()},
            "max_deviation": _num(self.max_deviation, d),
            "pass": self.passed,
            "flags": self.flags,
        }


def _family_domain(name, point) -> str | None:
    if name == "f3" and not abs(point["b"]) < 1:
        return "f3 needs |b| < 1"
    if name == "f4" and not abs(point["a"] * point["q"]) < 1:
        return "f4 needs |aq| < 1"
    return None


def crosscheck_equal_cfs(ids=("f1", "f2", "f3", "f4"), point=None, tol=mpf("1e-18"), budget: Budget | None = None,
                         precision: int | None = None) -> CrossCheckReport:
    """Evaluate the named Theorem 4.1 fractions at ``point`` and compare pairwise.

    Members whose extra restriction fails are flagged "domain-violation" and
    left out of the comparison.
    """
    budget = budget or Budget()
    with working_precision(precision) as dps:
        tol = mpf(tol)
        point = point if isinstance(point, ParameterPoint) else ParameterPoint(point)
        values, flags = {}, {}
        for name in ids:
            if name not in F_FAMILY:
                raise KeyError(f"unknown fraction {name!r}; choose from {sorted(F_FAMILY)}")
            why = _family_domain(name, point)
            if why:
                flags[name] = ["domain-violation", why]
                continue
            cf = F_FAMILY[name](point["q"], point["a"], point["b"], point["lam"])
            rep = evaluate(cf, tol * INNER_FACTOR, budget.max_quotients)
            if rep.value is DIVERGED:
                flags[name] = ["diverged"]
                continue
            values[name] = rep.value
        pairwise = {(x, y): rel_diff(values[x], values[y]) for x, y in combinations(values, 2)}
        worst = max(pairwise.values()) if pairwise else mpf(0)
        diverged = any("diverged" in f for f in flags.values())
        return CrossCheckReport(values, pairwise, worst, bool(worst < tol and not diverged), flags, dps)


# -- Bauer-Muir chains ---------------------------------------------------------------------


@dataclass
class BMReport:
    preset: str
    point: ParameterPoint
    steps: int
    N: int
    contract_max: mpf
    prefix_max: mpf
    soundness: mpf | None
    tail_offsets: list
    min_offset_distance: mpf | None
    passed: bool
    flags: list = field(default_factory=list)
    precision: int = 0

    def to_dict(self) -> dict:
        d = self.precision
        return {
            "preset": self.preset,
            "point": {k: _num(v, d) for k, v in self.point.items()},
            "steps": self.steps,
            "N": self.N,
            "contract_max": _num(self.contract_max, d),
            "prefix_max": _num(self.prefix_max, d),
            "soundness": _num(self.soundness, d),
            "tail_offsets": [_num(f, d) for f in self.tail_offsets],
            "min_offset_distance": _num(self.min_offset_distance, d),
            "pass": self.passed,
            "flags": self.flags,
        }


def bm_verify(preset: str, point, steps: int = 6, N: int = 40, tol=None, precision: int | None = None,
              budget: Budget | None = None) -> BMReport:
    """Check a Theorem 4.1 chain at ``point``.

    * contract: f_n of each step's transform equals S_n(w_n) of the fraction it
      transformed, n <= N;
    * prefix: the frozen (b_i, a_{i+1}) agree with the target fraction;
    * soundness: the chained fraction still evaluates to the source's value;
    * |f_n + 1| > 0.1 for the tail offsets f_n (flag only).

    BMDegenerate propagates with its step index.
    """
    p = get_preset(preset)
    budget = budget or Budget()
    with working_precision(precision) as dps:
        tol = mpf(10) ** (-(dps - 10)) if tol is None else mpf(tol)
        point = point if isinstance(point, ParameterPoint) else ParameterPoint(point)
        flags = []
        excluded = theorem41_excluded(point)
        if excluded:
            flags.append(f"theorem-4.1-exclusion: {excluded}")
        source, target = p.build(point, "source"), p.build(point, "target")
        family = p.w_family(point)
        chained, report = bm_chain(source, family, steps)

        contract = mpf(0)
        current = source
        for i in range(steps):
            w = family(i)
            contract = max(contract, bm_approximant_check(current, w, N, tol).max_deviation)
            current = report.steps[i].tail
        if steps == 0:
            contract = bm_approximant_check(source, family(0), N, tol).max_deviation

        prefix = mpf(0)
        for i, (b, a) in enumerate(report.prefix):
            prefix = max(prefix, rel_diff(b, target.b(i)), rel_diff(a, target.a(i + 1)))

        inner = tol * INNER_FACTOR
        src_val = evaluate(source, inner, budget.max_quotients)
        chain_val = evaluate(chained, inner, budget.max_quotients)
        soundness = None
        if src_val.converged and chain_val.converged:
            soundness = rel_diff(src_val.value, chain_val.value)
        else:
            flags.append("diverged")

        offsets = tail_offsets(report, target, inner, budget.max_quotients)
        finite = [f for f in offsets if f is not None]
        min_dist = min((abs(f + 1) for f in finite), default=None)
        if min_dist is not None and min_dist <= mpf("0.1"):
            flags.append("tail-offset-near-minus-one")

        passed = (
            contract < tol
            and prefix < tol
            and soundness is not None
            and soundness < max(tol, mpf(10) ** (-(dps - 15)))
        )
        return BMReport(preset, point, steps, N, contract, prefix, soundness, offsets, min_dist, bool(passed), flags,
                        dps)


def transform_first_step(preset: str, point):
    """The single Bauer-Muir transform of the source by w^(0) (for inspection)."""
    p = get_preset(preset)
    return bauer_muir(p.build(point, "source"), p.w_family(point)(0))


# -- JSON ------------------------------------------------------------------------------


def to_json(payload, kind: str, precision: int | None = None) -> str:
    """Wrap a report dict (or list of dicts) in the versioned envelope."""
    return json.dumps({"schema": SCHEMA, "kind": kind, "precision": precision or mp.dps, "data": payload}, indent=2)
