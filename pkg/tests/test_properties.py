"""Property tests: 50 random cases each, deviation below 10^-(P-10)."""

from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from qcf.bauermuir import ModifyingSequence, bm_approximant_check
from qcf.cfengine import (
    CFSpec,
    approximant,
    convergents,
    equivalence_transform,
    evaluate,
    modified_approximant,
    tail_cf,
)
from qcf.qseries import jackson_rhs, phi21, qpoch_finite

from oracles import qpinf, rel

P = 50
LIMIT = mpf(10) ** -(P - 10)
CASES = settings(max_examples=50, deadline=None)


def cplx(max_modulus, min_modulus=0.0):
    return st.builds(
        lambda r, t: mpc(mp.rect(r, t)),
        st.floats(min_modulus, max_modulus),
        st.floats(0, 6.283185307179586),
    )


coefficients = st.lists(st.tuples(cplx(1.0, 0.1), cplx(2.0, 0.1)), min_size=60, max_size=60)


def finite_spec(b0, pairs):
    return CFSpec(b0, lambda n: pairs[n - 1][0], lambda n: pairs[n - 1][1])


@CASES
@given(cplx(1.0), coefficients)
def test_determinant_identity(b0, pairs):
    # A_n B_{n-1} - A_{n-1} B_n = (-1)^(n-1) a_1 ... a_n
    with mp.workdps(P):
        pairs = [(mpc(a), mpc(b)) for a, b in pairs]
        conv = convergents(finite_spec(mpc(b0), pairs), 60)
        prod = mpc(1)
        for n in range(1, 61):
            prod *= pairs[n - 1][0]
            det = conv[n].A * conv[n - 1].B - conv[n - 1].A * conv[n].B
            expected = (-1) ** (n - 1) * prod
            scale = max(abs(conv[n].A * conv[n - 1].B), abs(conv[n - 1].A * conv[n].B), abs(expected))
            assert abs(det - expected) <= LIMIT * scale


@CASES
@given(coefficients, st.lists(st.floats(0.5, 2.0), min_size=41, max_size=41))
def test_equivalence_preserves_approximants(pairs, factors):
    with mp.workdps(P):
        cf = finite_spec(mpc(1), [(mpc(a), mpc(b)) for a, b in pairs])
        eq = equivalence_transform(cf, lambda n: mpf(factors[n]))
        for n in (1, 2, 7, 20, 40):
            try:
                base = approximant(cf, n)
            except ZeroDivisionError:
                continue
            assert rel(approximant(eq, n), base) < LIMIT


@CASES
@given(cplx(0.9), cplx(0.5), st.integers(0, 20), st.integers(0, 20))
def test_qpochhammer_splitting(a, q, m, n):
    with mp.workdps(P):
        a, q = mpc(a), mpc(q)
        whole = qpoch_finite(a, q, m + n)
        split = qpoch_finite(a, q, m) * qpoch_finite(a * q**m, q, n)
        assert abs(whole - split) <= LIMIT * max(1, abs(whole))


@CASES
@given(cplx(0.8, 0.05), cplx(0.8, 0.05), cplx(0.8, 0.05), cplx(0.5, 0.05), cplx(0.5, 0.05))
def test_jackson_matches_direct_sum(a, b, c, q, z):
    with mp.workdps(P):
        a, b, c, q, z = map(mpc, (a, b, c, q, z))
        tol = mpf(10) ** -P
        direct = phi21(a, b, c, q, z, tol)
        transformed = jackson_rhs(a, b, c, q, z, tol)
        slack = direct.tail_bound + transformed.tail_bound * max(1, abs(transformed.value))
        assert abs(direct.value - transformed.value) <= max(slack, LIMIT * max(1, abs(direct.value)))


@CASES
@given(st.lists(st.tuples(st.floats(0.1, 1.0), st.floats(0.1, 1.0)), min_size=31, max_size=31),
       st.lists(cplx(0.3), min_size=32, max_size=32))
def test_bauer_muir_contract_random(pairs, ws):
    with mp.workdps(P):
        cf = finite_spec(mpf("0.5"), [(mpf(a), mpf(b)) for a, b in pairs])
        w = ModifyingSequence(lambda n: mpc(ws[n]))
        try:
            check = bm_approximant_check(cf, w, 30, LIMIT)
        except ZeroDivisionError:
            return  # S_n(w_n) singular for this draw
        assert check.passed, check.max_deviation


@CASES
@given(cplx(0.5, 0.05))
def test_right_tail_modification(q):
    # S_n(f^(n)) = f for the Rogers-Ramanujan-type fraction 1 + K(q^n / 1).
    with mp.workdps(P):
        q = mpc(q)
        cf = CFSpec(1, lambda n: q**n, lambda n: 1)
        tol = mpf(10) ** -(P - 2)
        f = evaluate(cf, tol).value
        for n in (1, 3, 8):
            tail = evaluate(tail_cf(cf, n), tol).value
            assert rel(modified_approximant(cf, n, tail), f) < LIMIT


def test_qpinf_oracle_agrees_with_finite_products():
    with mp.workdps(P):
        a, q = mpf("0.3"), mpf("0.2")
        assert rel(qpoch_finite(a, q, 200), qpinf(a, q)) < LIMIT
