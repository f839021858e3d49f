"""Coefficient rules for the named continued fractions.

Each builder returns a :class:`~qcf.cfengine.CFSpec`.  Builders take plain
complex parameters; they do not check domains (the catalog does that).
Naturally terminating fractions (some a_n = 0) are allowed by default.
"""

from __future__ import annotations

from .cfengine import CFSpec, reciprocal_cf
from .precision import diff, to_complex


def _cf(b0, num, den, name, terminate=True, /, **params):
    return CFSpec(b0, num, den, name=name, params=params, terminate_on_zero=terminate)


def _c(*values):
    return [to_complex(v) for v in values]


# -- generalized Rogers-Ramanujan fractions for G(a,b,lam)/G(aq,b,lam q) -----


def f1_cf(q, a, b, lam, terminate=True) -> CFSpec:
    """1 + (aq+lam q)/1 + (bq+lam q^2)/1 + (aq^2+lam q^3)/1 + (bq^2+lam q^4)/1 + ..."""
    q, a, b, lam = _c(q, a, b, lam)

    def num(n):
        if n % 2:
            return diff(a * q ** ((n + 1) // 2), -lam * q**n)
        return diff(b * q ** (n // 2), -lam * q**n)

    return _cf(1, num, lambda n: 1, "f1", terminate, q=q, a=a, b=b, lam=lam)


def f2_cf(q, a, b, lam, terminate=True) -> CFSpec:
    """1 + aq + (lam q - ab q^2)/(1 + bq + aq^2) + (lam q^2 - ab q^4)/(1 + bq^2 + aq^3) + ..."""
    q, a, b, lam = _c(q, a, b, lam)
    return _cf(
        1 + a * q,
        lambda n: diff(lam * q**n, a * b * q ** (2 * n)),
        lambda n: 1 + b * q**n + a * q ** (n + 1),
        "f2", terminate, q=q, a=a, b=b, lam=lam,
    )


def f3_cf(q, a, b, lam, terminate=True) -> CFSpec:
    """1 - b + aq + (lam q + b)/(1 - b + aq^2) + (lam q^2 + b)/(1 - b + aq^3) + ...  (|b| < 1)"""
    q, a, b, lam = _c(q, a, b, lam)
    return _cf(
        1 - b + a * q,
        lambda n: diff(lam * q**n, -b),
        lambda n: 1 - b + a * q ** (n + 1),
        "f3", terminate, q=q, a=a, b=b, lam=lam,
    )


def f4_cf(q, a, b, lam, terminate=True) -> CFSpec:
    """1 + (aq + lam q)/(1 - aq + bq) + (aq + lam q^2)/(1 - aq + bq^2) + ...  (|aq| < 1)"""
    q, a, b, lam = _c(q, a, b, lam)
    return _cf(
        1,
        lambda n: diff(a * q, -lam * q**n),
        lambda n: 1 - a * q + b * q**n,
        "f4", terminate, q=q, a=a, b=b, lam=lam,
    )


def cor2_cf(q, a, b, lam) -> CFSpec:
    """1 + aq + (lam q - ab q^2)/(1 + aq^2) + (bq + lam q^2)/(1 + aq^3)
    + (lam q^3 - ab q^5)/(1 + aq^4) + (bq^2 + lam q^4)/(1 + aq^5) + ..."""
    q, a, b, lam = _c(q, a, b, lam)

    def num(n):
        k = (n + 1) // 2
        if n % 2:
            return diff(lam * q ** (2 * k - 1), a * b * q ** (3 * k - 1))
        return diff(b * q ** (n // 2), -lam * q**n)

    return _cf(1 + a * q, num, lambda n: 1 + a * q ** (n + 1), "cor2cf", q=q, a=a, b=b, lam=lam)


F_FAMILY = {"f1": f1_cf, "f2": f2_cf, "f3": f3_cf, "f4": f4_cf}


def hirschhorn_cf(a, b, c, x) -> CFSpec:
    """1 + a + b + (cx - a)/(1 + a + bx) + (cx^2 - a)/(1 + a + bx^2) + ..."""
    a, b, c, x = _c(a, b, c, x)
    return _cf(1 + a + b, lambda n: diff(c * x**n, a), lambda n: 1 + a + b * x**n, "hirschhorn1974",
               a=a, b=b, c=c, x=x)


# -- 2phi1 ratio fractions ---------------------------------------------------


def heine_coefficient(n, a, b, c, q):
    """Heine's a_n (before the factor z)."""
    if n % 2:
        m = (n - 1) // 2
        return -(q**m) * diff(1, a * q**m) * diff(b, c * q**m) / ((1 - c * q ** (2 * m)) * (1 - c * q ** (2 * m + 1)))
    m = n // 2
    return -(q ** (m - 1)) * diff(1, b * q**m) * diff(a, c * q**m) / ((1 - c * q ** (2 * m - 1)) * (1 - c * q ** (2 * m)))


def heine_cf(a, b, c, q, z) -> CFSpec:
    """1 + K(a_n z / 1) for 2phi1(a,b;c;q;z) / 2phi1(a,bq;cq;q;z)."""
    a, b, c, q, z = _c(a, b, c, q, z)
    return _cf(1, lambda n: heine_coefficient(n, a, b, c, q) * z, lambda n: 1, "heine",
               a=a, b=b, c=c, q=q, z=z)


def heine2_cf(a, b, c, q, z) -> CFSpec:
    """(1-bz)/(1-c) + (c-abz)(z-1)/((1-c)(1-bzq)) + (1-c)(1-bq)(cq-a)z/(1-bzq^2)
    + (c-abzq)(zq-1)q/(1-bzq^3) + (1-bq^2)(cq^2-a)zq/(1-bzq^4) + ..."""
    a, b, c, q, z = _c(a, b, c, q, z)

    def num(n):
        if n % 2:
            k = (n - 1) // 2
            return diff(c, a * b * z * q**k) * diff(z * q**k, 1) * q**k
        k = n // 2
        value = diff(1, b * q**k) * diff(c * q**k, a) * z * q ** (k - 1)
        return value * (1 - c) if n == 2 else value

    def den(n):
        value = 1 - b * z * q**n
        return value * (1 - c) if n == 1 else value

    return _cf((1 - b * z) / (1 - c), num, den, "heine2", a=a, b=b, c=c, q=q, z=z)


def thm25_cf(a, b, c, q, z) -> CFSpec:
    """(1-c) + (1-bq/a)u - (1-cq/a)(1-bq)u/((1-cq) + (1-bq^2/a)u) - ...  with u = az/q."""
    a, b, c, q, z = _c(a, b, c, q, z)
    u = a * z / q
    return _cf(
        (1 - c) + (1 - b * q / a) * u,
        lambda k: -diff(1, c * q**k / a) * diff(1, b * q**k) * u,
        lambda k: (1 - c * q**k) + (1 - b * q ** (k + 1) / a) * u,
        "thm25", a=a, b=b, c=c, q=q, z=z,
    )


# -- specializations from the corollaries ------------------------------------


def mod6_cf(q) -> CFSpec:
    """1 + q + (q^2-q^3)/(1+q^3) + (q^2+q^4)/(1+q^5) + (q^6-q^9)/(1+q^7) + (q^4+q^8)/(1+q^9) + ..."""
    (q,) = _c(q)

    def num(n):
        k = (n + 1) // 2
        if n % 2:
            return q ** (4 * k - 2) - q ** (6 * k - 3)
        return q**n + q ** (2 * n)

    return _cf(1 + q, num, lambda n: 1 + q ** (2 * n + 1), "mod6", q=q)


def ser3_cf(q) -> CFSpec:
    """1/(1-q + (q^2-q^3)/(1-q^3) + (q^4-q^2)/(1-q^5) + (q^6-q^9)/(1-q^7) + ...)."""
    (q,) = _c(q)

    def num(n):
        k = (n + 1) // 2
        if n % 2:
            return q ** (4 * k - 2) - q ** (6 * k - 3)
        return q ** (2 * n) - q**n

    inner = _cf(1 - q, num, lambda n: 1 - q ** (2 * n + 1), "ser3-inner", q=q)
    return reciprocal_cf(inner).with_rules(name="ser3")


def ser3b_cf(q) -> CFSpec:
    """2/(2+q + (q-q^3)/(1+q^3) + (q^2+q^3)/(1+q^5) + (q^5-q^9)/(1+q^7) + (q^4+q^7)/(1+q^9) + ...)."""
    (q,) = _c(q)

    def num(n):
        k = (n + 1) // 2
        if n % 2:
            return q ** (4 * k - 3) - q ** (6 * k - 3)
        return q**n + q ** (2 * n - 1)

    inner = _cf(2 + q, num, lambda n: 1 + q ** (2 * n + 1), "ser3b-inner", q=q)
    return reciprocal_cf(inner, 2).with_rules(name="ser3b")


def entry12_cf(a, b, q) -> CFSpec:
    """1 - ab + (a-bq)(b-aq)/((1-ab)(1+q^2)) + (a-bq^3)(b-aq^3)/((1-ab)(1+q^4)) + ..."""
    a, b, q = _c(a, b, q)
    return _cf(
        1 - a * b,
        lambda n: diff(a, b * q ** (2 * n - 1)) * diff(b, a * q ** (2 * n - 1)),
        lambda n: (1 - a * b) * (1 + q ** (2 * n)),
        "entry12", a=a, b=b, q=q,
    )


def entry12b_cf(a, b, q) -> CFSpec:
    """(1-a^2q)(1-b^2q)/(1-abq^2) + (a-bq)(b-aq)q^2/(1-abq^4)
    + (1-a^2q^3)(1-b^2q^3)q^2/(1-abq^6) + (a-bq^3)(b-aq^3)q^4/(1-abq^8) + ..."""
    a, b, q = _c(a, b, q)

    def num(n):
        k = (n + 1) // 2
        if n % 2:
            return diff(1, a * a * q ** (2 * k - 1)) * diff(1, b * b * q ** (2 * k - 1)) * q ** (2 * k - 2)
        return diff(a, b * q ** (2 * k - 1)) * diff(b, a * q ** (2 * k - 1)) * q ** (2 * k)

    return _cf(0, num, lambda n: 1 - a * b * q ** (2 * n), "entry12b", a=a, b=b, q=q)


def entry12c_cf(a, b, q) -> CFSpec:
    """1 + ab - (a+bq)(b+aq)/(1+q^2) + (a-bq)(b-aq)q^2/(1+q^4)
    - (a+bq^3)(b+aq^3)q^2/(1+q^6) + (a-bq^3)(b-aq^3)q^4/(1+q^8) - ..."""
    a, b, q = _c(a, b, q)

    def num(n):
        if n % 2:
            k = (n - 1) // 2
            return -diff(a, -b * q ** (2 * k + 1)) * diff(b, -a * q ** (2 * k + 1)) * q ** (2 * k)
        k = n // 2
        return diff(a, b * q ** (2 * k - 1)) * diff(b, a * q ** (2 * k - 1)) * q ** (2 * k)

    return _cf(1 + a * b, num, lambda n: 1 + q ** (2 * n), "entry12c", a=a, b=b, q=q)


def ram_t1_cf(a, b, q) -> CFSpec:
    """(a-b)/(1-q) - (a-bq)(b-aq)/(1-q^3) - (a-bq^2)(b-aq^2)q/(1-q^5)
    - (a-bq^3)(b-aq^3)q^2/(1-q^7) - ...

    The power of q on the m-th subtracted numerator is q^(m-1).
    """
    a, b, q = _c(a, b, q)

    def num(n):
        if n == 1:
            return diff(a, b)
        m = n - 1
        return -diff(a, b * q**m) * diff(b, a * q**m) * q ** (m - 1)

    return _cf(0, num, lambda n: 1 - q ** (2 * n - 1), "ram-t1", a=a, b=b, q=q)


def ram_t1b_cf(a, b, q) -> CFSpec:
    """(a-b)q/((ab+q)(1-q)) - (a-bq^2)(b-aq^2)q/((ab+q)(1-q^3))
    - (a-bq^4)(b-aq^4)q/((ab+q)(1-q^5)) - ..."""
    a, b, q = _c(a, b, q)

    def num(n):
        if n == 1:
            return diff(a, b) * q
        m = n - 1
        return -diff(a, b * q ** (2 * m)) * diff(b, a * q ** (2 * m)) * q

    return _cf(0, num, lambda n: (a * b + q) * (1 - q ** (2 * n - 1)), "ram-t1b", a=a, b=b, q=q)


def ram_t1c_cf(a, b, q) -> CFSpec:
    """(a-b)/(1-ab) - (1-a^2)(1-b^2)q/(1-abq^2) - (a-bq^2)(b-aq^2)q/(1-abq^4)
    - (1-a^2q^2)(1-b^2q^2)q^3/(1-abq^6) - (a-bq^4)(b-aq^4)q^3/(1-abq^8) - ..."""
    a, b, q = _c(a, b, q)

    def num(n):
        if n == 1:
            return diff(a, b)
        if n % 2 == 0:
            k = n // 2
            return -diff(1, a * a * q ** (2 * k - 2)) * diff(1, b * b * q ** (2 * k - 2)) * q ** (2 * k - 1)
        k = (n - 1) // 2
        return -diff(a, b * q ** (2 * k)) * diff(b, a * q ** (2 * k)) * q ** (2 * k - 1)

    return _cf(0, num, lambda n: 1 - a * b * q ** (2 * n - 2), "ram-t1c", a=a, b=b, q=q)
