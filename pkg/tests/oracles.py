"""Independent reference values.

Nothing here calls into ``qcf``: sums are straightforward loops run at twice
the working precision, and q-Pochhammer symbols come from mpmath's own
``qp``/``qhyper``.
"""

from mpmath import mp, mpc, mpf, mpmathify, qhyper, qp


def C(x):
    return mpc(mpmathify(x))


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1)


def _direct_sum(term, n_max=4000):
    """Add term(0), term(1), ... until five successive terms are negligible."""
    eps = mpf(10) ** (-2 * mp.dps)
    total, quiet = mpc(0), 0
    for n in range(n_max):
        t = term(n)
        total += t
        quiet = quiet + 1 if abs(t) < eps * max(1, abs(total)) else 0
        if quiet >= 5:
            return total
    raise AssertionError("oracle sum did not settle")


def G(a, lam, b, q):
    """sum_n q^{n(n+1)/2} prod_{k<n}(a + lam q^k) / ((q;q)_n (-bq;q)_n)."""
    with mp.workdps(2 * mp.dps):
        a, lam, b, q = map(C, (a, lam, b, q))

        def term(n):
            num = q ** (n * (n + 1) // 2)
            for k in range(n):
                num *= a + lam * q**k
            return num / (qp(q, q, n) * qp(-b * q, q, n))

        value = _direct_sum(term)
    return +value


def phi21(a, b, c, q, z):
    with mp.workdps(2 * mp.dps):
        value = qhyper([C(a), C(b)], [C(c)], C(q), C(z))
    return +value


def qpinf(a, q):
    with mp.workdps(2 * mp.dps):
        value = qp(C(a), C(q))
    return +value


def H(a, b, c, x):
    """sum_r x^{(r^2-r)/2} prod_{k=1..r}(b + c x^k) / ((x;x)_r (a;x)_{r+1})."""
    with mp.workdps(2 * mp.dps):
        a, b, c, x = map(C, (a, b, c, x))

        def term(r):
            num = x ** ((r * r - r) // 2)
            for k in range(1, r + 1):
                num *= b + c * x**k
            return num / (qp(x, x, r) * qp(a, x, r + 1))

        value = _direct_sum(term)
    return +value


def cf_value(b0, a, b, n):
    """b0 + a(1)/(b(1) + a(2)/(... + a(n)/b(n))) evaluated bottom-up."""
    with mp.workdps(2 * mp.dps):
        t = mpc(0)
        for k in range(n, 0, -1):
            t = C(a(k)) / (C(b(k)) + t)
        value = C(b0) + t
    return +value
