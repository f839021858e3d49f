import pytest
from mpmath import mp, mpc, mpf

from qcf.cfengine import (
    DIVERGED,
    CFSpec,
    approximant,
    check_tail_sequence,
    convergents,
    equivalence_transform,
    evaluate,
    finite_cf,
    modified_approximant,
    separate_limits,
    shift_cf,
    tail_cf,
)
from qcf.errors import SingularModification, SpecError
from qcf.families import f1_cf, f4_cf

from oracles import G, cf_value, qpinf, rel

with mp.workdps(50):
    Q, A, B, LAM = mpf("0.2"), mpf("0.3"), mpf("0.4"), mpf("0.5")


def fib():
    return CFSpec(1, lambda n: 1, lambda n: 1, name="fib")


def sample_cf():
    return CFSpec(mpf("0.5"), lambda n: mpf(1) / (n + 1), lambda n: 1 + mpf(n) / 3, name="sample")


class TestConvergents:
    def test_n_zero(self):
        (pair,) = convergents(sample_cf(), 0)
        assert (pair.A, pair.B) == (mpf("0.5"), 1)

    def test_fibonacci(self):
        assert convergents(fib(), 5)[5].value == mpf(13) / 8

    def test_rogers_ramanujan(self):
        q = mpf("0.1")
        cf = f1_cf(q, 0, 0, 1)
        expected = G(0, 1, 0, q) / G(0, q, 0, q)
        assert rel(convergents(cf, 30)[30].value, expected) < mpf("1e-25")

    def test_matches_bottom_up_evaluation(self):
        cf = sample_cf()
        assert rel(approximant(cf, 12), cf_value(cf.b0, cf.a, cf.b, 12)) < mpf("1e-45")

    def test_zero_numerator(self):
        cf = CFSpec(1, lambda n: 0 if n == 3 else 1, lambda n: 2)
        with pytest.raises(SpecError):
            convergents(cf, 5)

    def test_negative(self):
        with pytest.raises(ValueError):
            convergents(fib(), -1)


class TestEvaluate:
    def test_empty_tail(self):
        report = evaluate(finite_cf(mpf("0.7"), []), mpf("1e-30"))
        assert report.value == mpf("0.7")

    def test_f1_standard_point(self):
        report = evaluate(f1_cf(Q, A, B, LAM), mpf("1e-25"))
        expected = G(A, LAM, B, Q) / G(A * Q, LAM * Q, B, Q)
        assert rel(report.value, expected) < mpf("1e-20")

    def test_f4_outside_aq_disk(self):
        # With |aq| > 1 the f4 fraction must not reproduce the G ratio.
        q, a, b, lam = mpf("0.5"), mpf(3), mpf("0.2"), mpf("0.1")
        report = evaluate(f4_cf(q, a, b, lam), mpf("1e-25"), 2000)
        expected = G(a, lam, b, q) / G(a * q, lam * q, b, q)
        assert report.value is DIVERGED or rel(report.value, expected) > mpf("1e-10")

    def test_fibonacci_golden_ratio(self):
        report = evaluate(fib(), mpf("1e-40"))
        assert rel(report.value, (1 + mpf(5).sqrt()) / 2) < mpf("1e-39")

    def test_divergent(self):
        # 1 - 1/(1 - 1/(1 - ...)) cycles with period 3.
        cf = CFSpec(1, lambda n: -1, lambda n: 1)
        assert evaluate(cf, mpf("1e-20"), 300).value is DIVERGED

    def test_doubling_n_max(self):
        cf = f1_cf(Q, A, B, LAM)
        tol = mpf("1e-30")
        v1 = evaluate(cf, tol, 500).value
        v2 = evaluate(cf, tol, 1000).value
        assert abs(v1 - v2) <= 2 * tol * max(1, abs(v1))


class TestModifiedApproximant:
    def test_w_zero(self):
        cf = sample_cf()
        assert modified_approximant(cf, 7, 0) == approximant(cf, 7)

    def test_n_zero(self):
        cf = sample_cf()
        assert modified_approximant(cf, 0, mpf("0.25")) == mpf("0.75")

    def test_singular(self):
        # S_1(w) = (b0 b1 + a1 + w b0) / (b1 + w) is singular at w = -b1.
        cf = sample_cf()
        with pytest.raises(SingularModification):
            modified_approximant(cf, 1, -cf.b(1))

    def test_right_tail_reproduces_limit(self):
        cf = f1_cf(Q, A, B, LAM)
        f = evaluate(cf, mpf("1e-45")).value
        for n in (1, 4, 9):
            tail = evaluate(tail_cf(cf, n), mpf("1e-45")).value
            assert rel(modified_approximant(cf, n, tail), f) < mpf("1e-40")


class TestTails:
    def test_tail_zero(self):
        cf = sample_cf()
        t = tail_cf(cf, 0)
        assert t.b0 == 0
        assert all(t.a(n) == cf.a(n) and t.b(n) == cf.b(n) for n in range(1, 8))

    def test_tail_relation(self):
        cf = f1_cf(Q, A, B, LAM)
        tol = mpf("1e-45")
        f = evaluate(cf, tol).value
        f1 = evaluate(tail_cf(cf, 1), tol).value
        assert rel(f, cf.b0 + cf.a(1) / (cf.b(1) + f1)) < mpf("1e-40")

    def test_shift_keeps_leading_denominator(self):
        cf = sample_cf()
        s = shift_cf(cf, 3)
        assert s.b0 == cf.b(3) and s.a(1) == cf.a(4)

    def _right_tails(self, cf, N):
        values = [evaluate(tail_cf(cf, n), mpf("1e-48")).value for n in range(N + 1)]
        return values

    def test_right_tails_accepted(self):
        cf = f1_cf(Q, A, B, LAM)
        g = self._right_tails(cf, 10)
        assert check_tail_sequence(cf, g.__getitem__, 10, mpf("1e-40")).ok

    def test_perturbed_rejected(self):
        cf = f1_cf(Q, A, B, LAM)
        g = self._right_tails(cf, 10)
        g[6] += mpf("1e-6")
        check = check_tail_sequence(cf, g.__getitem__, 10, mpf("1e-40"))
        # g_6 enters the checks at n = 5 and n = 6; the first failure is reported.
        assert not check.ok and check.bad_index == 5

    def test_modifying_sequence_is_not_a_tail(self):
        cf = f1_cf(Q, A, B, LAM)
        w = lambda n: (A if n % 2 == 0 else B) * Q ** (n // 2 + 1)  # noqa: E731
        assert not check_tail_sequence(cf, w, 10, mpf("1e-20")).ok


class TestEquivalence:
    def test_identity_factors(self):
        cf = sample_cf()
        eq = equivalence_transform(cf, lambda n: 1)
        assert all(eq.a(n) == cf.a(n) and eq.b(n) == cf.b(n) for n in range(1, 10))

    def test_zero_factor(self):
        eq = equivalence_transform(sample_cf(), lambda n: 0)
        with pytest.raises(SpecError):
            eq.b(1)


class TestSeparateLimits:
    def test_f1_limits(self):
        cf = f1_cf(Q, A, B, LAM)
        limits = separate_limits(cf, mpf("1e-30"))
        pref = qpinf(-B * Q, Q)
        assert rel(limits.A, pref * G(A, LAM, B, Q)) < mpf("1e-25")
        assert rel(limits.B, pref * G(A * Q, LAM * Q, B, Q)) < mpf("1e-25")

    def test_fibonacci_not_separate(self):
        limits = separate_limits(fib(), mpf("1e-20"), 500)
        assert not limits.separate and limits.A is None


def test_complex_coefficients():
    cf = CFSpec(mpc(1, 1), lambda n: mpc(0.3, -0.2) / n, lambda n: mpc(1, 0.1 * n))
    assert rel(approximant(cf, 15), cf_value(cf.b0, cf.a, cf.b, 15)) < mpf("1e-45")
