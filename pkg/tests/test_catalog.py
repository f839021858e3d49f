import pytest
from mpmath import mp, mpf

from qcf import catalog
from qcf.cfengine import approximant, equivalence_transform, evaluate
from qcf.errors import UnknownIdentity
from qcf.families import entry12_cf

from oracles import C, _direct_sum, qpinf, rel

ALL_IDS = catalog.ids()


class TestRegistry:
    @pytest.mark.parametrize("id", ["gcf1", "entry12", "heine"])
    def test_contains(self, id):
        assert id in [row[0] for row in catalog.list_identities()]

    def test_stable_order(self):
        assert catalog.ids() == ALL_IDS and len(set(ALL_IDS)) == len(ALL_IDS)

    def test_gcf2_notes(self):
        assert "|aq| < 1" in catalog.get("gcf2").notes + catalog.get("gcf2").domain_text

    def test_gcf4_notes(self):
        assert "|b| < 1" in catalog.get("gcf4").notes + catalog.get("gcf4").domain_text

    def test_unknown(self):
        with pytest.raises(UnknownIdentity):
            catalog.get("nope")

    def test_export(self):
        text = catalog.export_text()
        assert all(f"id: {id}\n" in text for id in ALL_IDS)


class TestSampling:
    @pytest.mark.parametrize("id", ALL_IDS)
    def test_satisfiable(self, id):
        rec = catalog.get(id)
        for seed in range(1, 21):
            point = catalog.sample_point(id, seed)
            assert set(rec.params) <= set(point)
            assert rec.domain(point)

    def test_deterministic(self):
        assert catalog.sample_point("heine", 7) == catalog.sample_point("heine", 7)
        assert catalog.sample_point("heine", 7) != catalog.sample_point("heine", 8)

    def test_gcf2_aq_disk(self):
        for seed in range(1, 21):
            p = catalog.sample_point("gcf2", seed)
            assert abs(p["a"] * p["q"]) < 1

    def test_thm25ii_unit_circle(self):
        for seed in range(1, 11):
            p = catalog.sample_point("thm25ii", seed)
            u = p["a"] * p["z"] / p["q"]
            assert abs(abs(u) - 1) < mpf("1e-45")
            assert abs(u - 1) > mpf("0.1")

    def test_real_q(self):
        p = catalog.sample_point("mod6", 3, real_q=True)
        assert p["q"].imag == 0 and 0 < p["q"].real <= mpf("0.5")

    def test_real_q_unsupported(self):
        with pytest.raises(ValueError):
            catalog.sample_point("heine", 1, real_q=True)


class TestSides:
    @pytest.mark.parametrize("id", ALL_IDS)
    def test_sides_evaluate(self, id):
        rec = catalog.get(id)
        for seed in range(1, 21):
            point = catalog.sample_point(id, seed)
            for side in (rec.lhs, rec.rhs):
                catalog.build_side(side, point, mpf("1e-20"))

    def test_slater_first_identity(self):
        q = mpf("0.4")

        def term(n):
            return mp.qp(-q, q * q, n) * q ** (n * n) / mp.qp(q**4, q**4, n)

        with mp.workdps(100):
            series = _direct_sum(term)
        product = qpinf(q**3, q**6) ** 2 * qpinf(q**6, q**6) * qpinf(-q, q * q) / qpinf(q * q, q * q)
        assert rel(series, product) < mpf("1e-40")
        assert rel(catalog.slater_sum(q, 0).value, series) < mpf("1e-40")

    def test_slater_companion_series(self):
        q = C("0.3+0.2j")

        def term(n):
            return mp.qp(-q, q * q, n) * q ** (n * n + 2 * n) / mp.qp(q**4, q**4, n)

        with mp.workdps(100):
            series = _direct_sum(term)
        assert rel(catalog.slater_sum(q, 2).value, series) < mpf("1e-40")


class TestEntry12:
    def test_branch_conversion(self):
        # Factoring -ab out of every quotient maps the (a, b) fraction onto the (1/a, 1/b) one.
        a, b, q = C("1.6+0.4j"), C("1.3-0.2j"), C("0.3+0.1j")
        cf = entry12_cf(a, b, q)
        inverse = entry12_cf(1 / a, 1 / b, q)
        eq = equivalence_transform(cf, lambda n: -1 / (a * b))
        for n in range(2, 12):
            assert rel(eq.a(n), inverse.a(n)) < mpf("1e-45")
            assert rel(eq.b(n), inverse.b(n)) < mpf("1e-45")
        for n in (5, 20, 40):
            assert rel(approximant(eq, n), approximant(cf, n)) < mpf("1e-40")
        tol = mpf("1e-30")
        assert rel(evaluate(cf, tol).value, -a * b * evaluate(inverse, tol).value) < mpf("1e-28")
