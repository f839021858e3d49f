"""Acceptance criteria 1-8.

Each test records one PASS/FAIL line (echoed in the terminal summary by
conftest.py) and then asserts.  Expected values come from ``oracles`` (direct
summation at doubled precision, mpmath's q-Pochhammer) or from comparing two
independently computed quantities.
"""

import random
import time

import pytest
from mpmath import mp, mpc, mpf

from qcf import catalog, harness
from qcf.bauermuir import ModifyingSequence
from qcf.cfengine import convergents, equivalence_transform, approximant, evaluate, separate_limits, CFSpec
from qcf.families import F_FAMILY
from qcf.qseries import jackson_rhs, phi21, qpoch_finite

from oracles import G, qpinf, rel

P = 50
STRUCT = mpf(10) ** -(P - 10)
RESULTS: list = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    RESULTS.append(line)
    print(line)


def fmt(x) -> str:
    return mp.nstr(x, 3) if x is not None else "n/a"


def g_points(n):
    return [catalog.sample_point("gcf1", seed) for seed in range(1, n + 1)]


def test_criterion_1_g_ratio_keystone():
    start = time.perf_counter()
    tol = mpf("1e-20")
    worst, failures = mpf(0), []
    rec = catalog.get("gcf1")
    for seed, p in enumerate(g_points(100), start=1):
        q, a, b, lam = (p[k] for k in ("q", "a", "b", "lam"))
        assert abs(q) <= 0.5 and max(abs(a), abs(b), abs(lam)) <= 0.7
        cf = catalog.build_side(rec.rhs, p)
        report = evaluate(cf, tol * mpf("1e-3"), 400)
        if not report.converged:
            failures.append(seed)
            continue
        d = rel(report.value, G(a * q, lam * q, b, q) / G(a, lam, b, q))
        worst = max(worst, d)
        if d >= tol:
            failures.append(seed)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    record(1, "G-ratio keystone, 100 points, n <= 400", ok,
           f"worst rel_diff {fmt(worst)} < 1e-20, {elapsed:.1f}s < 120s, failing seeds {failures}")
    assert ok


def test_criterion_2_fourfold_equality():
    tol = mpf("1e-18")
    worst, failures = mpf(0), []
    for seed, p in enumerate(g_points(100), start=1):
        r = harness.crosscheck_equal_cfs(["f1", "f2", "f3", "f4"], p, tol, precision=P)
        worst = max(worst, r.max_deviation)
        if not r.passed or len(r.values) != 4:
            failures.append(seed)
    ok = not failures
    record(2, "f1 = f2 = f3 = f4 at the criterion-1 points", ok,
           f"worst pairwise rel_diff {fmt(worst)} < 1e-18, failing seeds {failures}")
    assert ok


def test_criterion_3_bauer_muir_contract():
    tol = STRUCT
    worst_contract, worst_prefix, failures = mpf(0), mpf(0), []
    for preset in ("thm41-f1f2", "thm41-f2f3", "thm41-f3f4"):
        for seed, p in enumerate(g_points(20), start=1):
            r = harness.bm_verify(preset, p, steps=6, N=50, tol=tol, precision=P)
            worst_contract = max(worst_contract, r.contract_max)
            worst_prefix = max(worst_prefix, r.prefix_max)
            if not (r.contract_max < tol and r.prefix_max < tol):
                failures.append((preset, seed))
    ok = not failures
    record(3, "Bauer-Muir contract n <= 50 and 6-step prefix, 3 presets x 20 points", ok,
           f"contract {fmt(worst_contract)}, prefix {fmt(worst_prefix)} < 1e-40, failing {failures}")
    assert ok


def _verify_many(id, seeds, tol, **kw):
    reports = [harness.verify_seed(id, s, tol, precision=P, **kw) for s in seeds]
    worst = max((r.rel_diff for r in reports if r.rel_diff is not None), default=None)
    bad = [r.seed for r in reports if not r.passed]
    return worst, bad, reports


def test_criterion_4_heine_family():
    parts, ok = [], True
    for id, n, tol in (("heine", 20, "1e-18"), ("heine2", 20, "1e-18"), ("thm25i", 20, "1e-18"),
                       ("thm25iii", 10, "1e-18"), ("thm25ii", 5, "1e-10")):
        worst, bad, reports = _verify_many(id, range(1, n + 1), mpf(tol))
        for r in reports:
            p = r.point
            u = abs(p["a"] * p["z"] / p["q"])
            if id in ("heine", "heine2", "thm25i"):
                assert abs(p["z"]) <= 0.5
            if id == "heine2":
                assert abs(p["c"] / p["b"]) < 1
            if id == "thm25i":
                assert u < 1
            if id == "thm25iii":
                assert u > 1
            if id == "thm25ii":
                assert abs(u - 1) < mpf("1e-40")
        ok = ok and not bad
        parts.append(f"{id} {fmt(worst)}<{tol}" + (f" failing {bad}" if bad else ""))
    record(4, "Heine family and Theorem 2.5 cases", ok, "; ".join(parts))
    assert ok


def test_criterion_5_section2_corollaries():
    parts, ok = [], True
    for id in ("cor2cf", "mod6", "ser3", "ser3b", "hirschhorn-gablq", "hirschhorn1974"):
        worst, bad, reports = _verify_many(id, range(1, 21), mpf("1e-15"), real_q=True)
        base = "x" if "x" in reports[0].point else "q"
        assert all(r.point[base].imag == 0 and 0 < r.point[base].real <= 0.5 for r in reports)
        ok = ok and not bad
        parts.append(f"{id} {fmt(worst)}" + (f" failing {bad}" if bad else ""))
    record(5, "corollary identities at 20 real-q points, tol 1e-15", ok, "; ".join(parts))
    assert ok


def test_criterion_6_product_identities():
    parts, ok = [], True
    for id in ("bailey-daum", "jackson", "lemma31", "entry12", "entry12b", "entry12c",
               "ram-t1", "ram-t1b", "ram-t1c"):
        worst, bad, reports = _verify_many(id, range(1, 21), mpf("1e-15"))
        if id == "entry12":
            sizes = [abs(r.point["a"] * r.point["b"]) for r in reports]
            assert any(s < 1 for s in sizes) and any(s > 1 for s in sizes)
        ok = ok and not bad
        parts.append(f"{id} {fmt(worst)}" + (f" failing {bad}" if bad else ""))

    # a = b q^3: the second partial numerator vanishes and the fraction is finite.
    b, q = mpc("0.6", "0.2"), mpc("0.35", "-0.1")
    a = b * q**3
    r = harness.verify("entry12", {"a": a, "b": b, "q": q}, mpf("1e-15"), precision=P)
    exact_cf = 1 - a * b + (a - b * q) * (b - a * q) / ((1 - a * b) * (1 + q**2))
    q4 = q**4
    exact_product = qpinf(a * a * q, q4) * qpinf(b * b * q, q4) / (qpinf(a * a * q**3, q4) * qpinf(b * b * q**3, q4))
    finite_ok = (r.passed and "terminated-cf" in r.flags
                 and rel(r.rhs, exact_cf) < STRUCT and rel(exact_cf, exact_product) < STRUCT)
    ok = ok and finite_ok
    parts.append(f"entry12 at a=bq^3 terminated, |cf - product| {fmt(rel(exact_cf, exact_product))}")
    record(6, "product identities at 20 points, tol 1e-15", ok, "; ".join(parts))
    assert ok


def test_criterion_7_separate_convergence():
    tol = mpf("1e-15")
    worst, failures = mpf(0), []
    for seed, p in enumerate(g_points(10), start=1):
        q, a, b, lam = (p[k] for k in ("q", "a", "b", "lam"))
        cf = F_FAMILY["f1"](q, a, b, lam)
        limits = separate_limits(cf, mpf("1e-25"), 2000)
        if not limits.separate:
            failures.append(seed)
            continue
        pref = qpinf(-b * q, q)
        d = max(rel(limits.A, pref * G(a, lam, b, q)), rel(limits.B, pref * G(a * q, lam * q, b, q)))
        worst = max(worst, d)
        if d >= tol:
            failures.append(seed)
    ok = not failures
    record(7, "A_n and B_n limits of the f1 fraction, 10 points", ok,
           f"worst rel_diff {fmt(worst)} < 1e-15, failing seeds {failures}")
    assert ok


def _rand_c(rng, hi, lo=0.0):
    return mpc(mp.rect(rng.uniform(lo, hi), rng.uniform(0, 2 * mp.pi)))


def test_criterion_8_structural_invariants():
    rng = random.Random("acceptance-8")
    worst = {"determinant": mpf(0), "equivalence": mpf(0), "splitting": mpf(0), "jackson": mpf(0)}

    for _ in range(50):
        pairs = [(_rand_c(rng, 1, 0.1), _rand_c(rng, 2, 0.1)) for _ in range(60)]
        cf = CFSpec(_rand_c(rng, 1), lambda n, p=pairs: p[n - 1][0], lambda n, p=pairs: p[n - 1][1])
        conv = convergents(cf, 60)
        prod = mpc(1)
        for n in range(1, 61):
            prod *= pairs[n - 1][0]
            det = conv[n].A * conv[n - 1].B - conv[n - 1].A * conv[n].B
            expected = (-1) ** (n - 1) * prod
            scale = max(abs(conv[n].A * conv[n - 1].B), abs(conv[n - 1].A * conv[n].B), abs(expected))
            worst["determinant"] = max(worst["determinant"], abs(det - expected) / scale)

        factors = [mpf(rng.uniform(0.5, 2)) for _ in range(41)]
        eq = equivalence_transform(cf, lambda n, f=factors: f[n])
        for n in (1, 5, 20, 40):
            worst["equivalence"] = max(worst["equivalence"], rel(approximant(eq, n), approximant(cf, n)))

        a, q = _rand_c(rng, 0.9), _rand_c(rng, 0.5)
        m, k = rng.randint(0, 20), rng.randint(0, 20)
        whole = qpoch_finite(a, q, m + k)
        split = qpoch_finite(a, q, m) * qpoch_finite(a * q**m, q, k)
        worst["splitting"] = max(worst["splitting"], abs(whole - split) / max(1, abs(whole)))

        a, b, c = (_rand_c(rng, 0.8, 0.05) for _ in range(3))
        q, z = _rand_c(rng, 0.5, 0.05), _rand_c(rng, 0.5, 0.05)
        tight = mpf(10) ** -P
        d = rel(phi21(a, b, c, q, z, tight).value, jackson_rhs(a, b, c, q, z, tight).value)
        worst["jackson"] = max(worst["jackson"], d)

    ok = all(v < STRUCT for v in worst.values())
    record(8, "structural invariants, 50 random cases each", ok,
           ", ".join(f"{k} {fmt(v)}" for k, v in worst.items()) + " < 1e-40")
    assert ok


@pytest.fixture(autouse=True, scope="module")
def _summary():
    yield
