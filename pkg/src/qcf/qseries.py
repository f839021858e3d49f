"""q-Pochhammer symbols, basic hypergeometric series and closed-form
product evaluations at extended precision.

Every scalar is an ``mpmath.mpc`` at the ambient ``mp.dps``.  Series are
summed forward until both the last term and a rigorous geometric bound on the
remaining tail drop below ``tol``; products are truncated using
``|log(1 - x)| <= 2|x|`` for ``|x| <= 1/2``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from itertools import islice

from mpmath import exp, isfinite, mpc, mpf

from .errors import DomainError, NoConvergence
from .precision import default_tol, exclusion_radius, to_complex

INFINITY = math.inf
DEFAULT_MAX_TERMS = 10_000

SYMBOLS = ("q", "a", "b", "lam", "c", "z", "x")


@dataclass(frozen=True)
class SeriesResult:
    """A truncated sum or product.

    ``tail_bound`` bounds the absolute truncation error for series.  For
    infinite products it bounds the *relative* error of ``value``.
    """

    value: mpc
    terms_used: int
    tail_bound: mpf

    def __complex__(self):
        return complex(self.value)


class ParameterPoint(Mapping):
    """Immutable map from parameter symbol to complex value.

    Symbols are the ones the identities use: ``q a b lam c z x``.  Values are
    accessible both as ``p["lam"]`` and ``p.lam``.
    """

    __slots__ = ("_values",)

    def __init__(self, values=None, **kwargs):
        merged = dict(values or {})
        merged.update(kwargs)
        unknown = set(merged) - set(SYMBOLS)
        if unknown:
            raise KeyError(f"unknown parameter symbol(s): {sorted(unknown)}")
        object.__setattr__(self, "_values", {k: to_complex(v) for k, v in merged.items()})

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return (s for s in SYMBOLS if s in self._values)

    def __len__(self):
        return len(self._values)

    def __getattr__(self, name):
        try:
            return self._values[name]
        except KeyError:
            raise AttributeError(name) from None

    def __setattr__(self, name, value):
        raise AttributeError("ParameterPoint is immutable")

    def replace(self, **changes) -> "ParameterPoint":
        return ParameterPoint({**self._values, **changes})

    def __repr__(self):
        inner = ", ".join(f"{k}={complex(v)!r}" for k, v in self.items())
        return f"ParameterPoint({inner})"

    def __eq__(self, other):
        if not isinstance(other, ParameterPoint):
            return NotImplemented
        return self._values == other._values

    def __hash__(self):
        return hash(tuple((k, complex(v)) for k, v in self.items()))

    def __reduce__(self):
        return (ParameterPoint, (dict(self._values),))


# -- helpers ---------------------------------------------------------------


def check_q(q, name="q"):
    if abs(q) >= 1:
        raise DomainError(f"|{name}| = {float(abs(q)):.6g} >= 1")


def check_nonzero(value, what):
    if abs(value) < exclusion_radius():
        raise DomainError(f"{what} vanishes (|{what}| < exclusion radius)")


def check_not_pole(c, q, what="c"):
    """Raise unless ``1 - c q^k`` stays outside the exclusion radius for all k >= 0.

    Only the finitely many k with ``|c q^k| >= 1/2`` can vanish, so those are
    the only ones inspected.
    """
    c = to_complex(c)
    r = abs(q)
    radius = exclusion_radius()
    k = 0
    qk = mpc(1)
    while abs(c) * r**k >= mpf(1) / 2:
        if abs(1 - c * qk) < radius:
            raise DomainError(f"{what} = q^(-{k}) is a pole")
        k += 1
        qk *= q
        if r == 0:
            break


def geometric_tail(size, rho):
    """Bound on sum_{k>n} |t_k| given |t_n| = size and all later ratios <= rho."""
    if rho >= 1:
        return None
    return size * rho / (1 - rho)


def _finite(value, what):
    if not isfinite(value):
        raise DomainError(f"{what} is not finite")
    return value


def sum_series(terms: Iterable, tol=None, max_terms=DEFAULT_MAX_TERMS, what="series") -> SeriesResult:
    """Sum ``(term, tail)`` pairs until the stopping rule holds.

    ``tail`` must bound ``|sum of all later terms|`` (or be None when no bound
    is available yet).  Stops once ``|term| < tol * max(1, |partial sum|)`` and
    ``tail < tol``.  A finite iterable is summed exactly.
    """
    tol = default_tol() if tol is None else mpf(tol)
    total = mpc(0)
    n = 0
    for n, (term, tail) in enumerate(islice(terms, max_terms), start=1):
        total += term
        if tail is not None and abs(term) <= tol * max(1, abs(total)) and tail < tol:
            return SeriesResult(_finite(total, what), n, mpf(tail))
    if n >= max_terms:
        raise NoConvergence(f"{what}: tolerance not met within {max_terms} terms", terms_used=n)
    return SeriesResult(_finite(total, what), n, mpf(0))


def _ratio_series(first, step, bound) -> Iterator:
    """Yield (t_n, tail_n) for t_{n+1} = t_n * step(n).

    ``bound(n)`` returns rho_n >= |t_{k+1}/t_k| for every k >= n, or None.
    """
    t = first
    n = 0
    while True:
        rho = bound(n)
        yield t, (None if rho is None else geometric_tail(abs(t), rho))
        if t == 0:
            return
        t = t * step(n)
        n += 1


# -- q-Pochhammer symbols ----------------------------------------------------


def qpoch_finite(a, q, n: int) -> mpc:
    """(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a, q = to_complex(a), to_complex(q)
    p = mpc(1)
    qk = mpc(1)
    for _ in range(n):
        p *= 1 - a * qk
        qk *= q
    return p


def qpoch_infinite(a, q, tol=None, max_terms=DEFAULT_MAX_TERMS) -> SeriesResult:
    """(a;q)_oo by direct partial products.

    After k factors the remaining logarithm is bounded by
    ``2 |a| |q|^k / (1 - |q|)`` once ``|a q^k| <= 1/2``; the product stops when
    ``exp(that) - 1`` (a relative error bound) drops below ``tol``.
    """
    a, q = to_complex(a), to_complex(q)
    check_q(q)
    tol = default_tol() if tol is None else mpf(tol)
    r = abs(q)
    size = abs(a)
    p = mpc(1)
    qk = mpc(1)
    rk = mpf(1)
    for k in range(max_terms + 1):
        if size * rk <= mpf(1) / 2:
            rel = exp(2 * size * rk / (1 - r)) - 1
            if rel < tol:
                return SeriesResult(p, k, rel)
        if k == max_terms:
            break
        p *= 1 - a * qk
        if p == 0:
            return SeriesResult(p, k + 1, mpf(0))
        qk *= q
        rk *= r
    raise NoConvergence(f"(a;q)_oo not within tol after {max_terms} factors", terms_used=max_terms)


def qpoch_multi(values, q, n=INFINITY, tol=None) -> SeriesResult:
    """(a_1, ..., a_k; q)_n as the product of the individual symbols."""
    q = to_complex(q)
    if n == INFINITY:
        check_q(q)
        tol = default_tol() if tol is None else mpf(tol)
        parts = [qpoch_infinite(v, q, tol / max(1, len(values))) for v in values]
        value = mpc(1)
        growth = mpf(1)
        for part in parts:
            value *= part.value
            growth *= 1 + part.tail_bound
        return SeriesResult(value, sum(p.terms_used for p in parts), growth - 1)
    value = mpc(1)
    for v in values:
        value *= qpoch_finite(v, q, int(n))
    return SeriesResult(value, int(n) * len(values), mpf(0))


def qpoch_ratio(numer, denom, q, tol=None) -> SeriesResult:
    """(numer...;q)_oo / (denom...;q)_oo with combined relative bound."""
    q = to_complex(q)
    for d in denom:
        check_not_pole(d, q, "denominator parameter")
    top = qpoch_multi(numer, q, INFINITY, tol)
    bottom = qpoch_multi(denom, q, INFINITY, tol)
    check_nonzero(bottom.value, "denominator product")
    rel = (1 + top.tail_bound) * (1 + bottom.tail_bound) / (1 - min(bottom.tail_bound, mpf(1) / 2)) - 1
    return SeriesResult(top.value / bottom.value, top.terms_used + bottom.terms_used, rel)


# -- basic hypergeometric series ---------------------------------------------


def phi21(a, b, c, q, z, tol=None, max_terms=DEFAULT_MAX_TERMS) -> SeriesResult:
    """2phi1(a, b; c; q; z) = sum_n (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) z^n."""
    a, b, c, q, z = map(to_complex, (a, b, c, q, z))
    check_q(q)
    check_not_pole(c, q, "c")
    r = abs(q)

    def step(n):
        qn = q**n
        return (1 - a * qn) * (1 - b * qn) * z / ((1 - c * qn) * (1 - qn * q))

    def bound(n):
        rn = r**n
        if abs(c) * rn >= 1:
            return None
        return abs(z) * (1 + abs(a) * rn) * (1 + abs(b) * rn) / ((1 - abs(c) * rn) * (1 - rn * r))

    return sum_series(_ratio_series(mpc(1), step, bound), tol, max_terms, "2phi1")


def G_fn(a, lam, b, q, tol=None, max_terms=DEFAULT_MAX_TERMS) -> SeriesResult:
    """Ramanujan's G(a, lam; b; q).

    sum_n q^{(n^2+n)/2} (a+lam)(a+lam q)...(a+lam q^{n-1})
          / ((1-q)...(1-q^n) (1+bq)...(1+bq^n))
    """
    a, lam, b, q = map(to_complex, (a, lam, b, q))
    check_q(q)
    check_not_pole(-b * q, q, "b")
    r = abs(q)

    def step(n):
        qn1 = q ** (n + 1)
        return qn1 * (a + lam * q**n) / ((1 - qn1) * (1 + b * qn1))

    def bound(n):
        rn1 = r ** (n + 1)
        if abs(b) * rn1 >= 1:
            return None
        return rn1 * (abs(a) + abs(lam) * r**n) / ((1 - rn1) * (1 - abs(b) * rn1))

    return sum_series(_ratio_series(mpc(1), step, bound), tol, max_terms, "G")


def hirschhorn_H(a, b, c, x, tol=None, max_terms=DEFAULT_MAX_TERMS) -> SeriesResult:
    """H(a,b,c,x) = sum_r x^{(r^2-r)/2} (b+cx)...(b+cx^r) / ((x;x)_r (a;x)_{r+1})."""
    a, b, c, x = map(to_complex, (a, b, c, x))
    check_q(x, "x")
    if abs(a) >= 1:
        raise DomainError(f"|a| = {float(abs(a)):.6g} >= 1")
    check_not_pole(a, x, "a")
    r = abs(x)

    def step(n):
        xn1 = x ** (n + 1)
        return x**n * (b + c * xn1) / ((1 - xn1) * (1 - a * xn1))

    def bound(n):
        rn1 = r ** (n + 1)
        return r**n * (abs(b) + abs(c) * rn1) / ((1 - rn1) * (1 - abs(a) * rn1))

    return sum_series(_ratio_series(1 / (1 - a), step, bound), tol, max_terms, "H")


# -- closed forms used as independent right-hand sides -----------------------


def jackson_rhs(a, b, c, q, z, tol=None, max_terms=DEFAULT_MAX_TERMS) -> SeriesResult:
    """Jackson's transform of 2phi1(a,b;c;q;z):

    (az;q)_oo/(z;q)_oo * sum_k (a, c/b;q)_k / (c, az, q;q)_k (-bz)^k q^{k(k-1)/2}
    """
    a, b, c, q, z = map(to_complex, (a, b, c, q, z))
    check_q(q)
    check_nonzero(b, "b")
    check_not_pole(c, q, "c")
    check_not_pole(a * z, q, "az")
    check_not_pole(z, q, "z")
    tol = default_tol() if tol is None else mpf(tol)
    r = abs(q)
    cb = c / b

    def step(k):
        qk = q**k
        return (1 - a * qk) * (1 - cb * qk) * (-b * z) * qk / ((1 - c * qk) * (1 - a * z * qk) * (1 - qk * q))

    def bound(k):
        rk = r**k
        if abs(c) * rk >= 1 or abs(a * z) * rk >= 1:
            return None
        return (
            abs(b * z) * rk * (1 + abs(a) * rk) * (1 + abs(cb) * rk)
            / ((1 - abs(c) * rk) * (1 - abs(a * z) * rk) * (1 - rk * r))
        )

    series = sum_series(_ratio_series(mpc(1), step, bound), tol / 4, max_terms, "Jackson series")
    pref = qpoch_ratio([a * z], [z], q, tol / 4)
    value = pref.value * series.value
    tail = abs(pref.value) * series.tail_bound + abs(value) * pref.tail_bound
    return SeriesResult(_finite(value, "Jackson transform"), series.terms_used + pref.terms_used, tail)


def bailey_daum_rhs(a, b, q, tol=None) -> SeriesResult:
    """(-q;q)_oo (aq, aq^2/b^2; q^2)_oo / (aq/b, -q/b; q)_oo, valid for |q/b| < 1."""
    a, b, q = map(to_complex, (a, b, q))
    check_q(q)
    check_nonzero(b, "b")
    if abs(q / b) >= 1:
        raise DomainError(f"|q/b| = {float(abs(q / b)):.6g} >= 1")
    tol = default_tol() if tol is None else mpf(tol)
    top = qpoch_infinite(-q, q, tol / 4)
    even = qpoch_multi([a * q, a * q * q / (b * b)], q * q, INFINITY, tol / 4)
    bottom = qpoch_ratio([], [a * q / b, -q / b], q, tol / 4)
    value = top.value * even.value * bottom.value
    rel = (1 + top.tail_bound) * (1 + even.tail_bound) * (1 + bottom.tail_bound) - 1
    return SeriesResult(value, top.terms_used + even.terms_used + bottom.terms_used, rel)


def qbinomial_ratio(a, b, q, sign=1, tol=None) -> SeriesResult:
    """(sign*b;q)_oo / (sign*a;q)_oo, the product side of the q-binomial theorem."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b, q = map(to_complex, (a, b, q))
    check_q(q)
    if abs(a) >= 1:
        raise DomainError(f"|a| = {float(abs(a)):.6g} >= 1")
    return qpoch_ratio([sign * b], [sign * a], q, tol)


def qbinomial_series(a, b, q, sign=1, tol=None, max_terms=DEFAULT_MAX_TERMS) -> SeriesResult:
    """sum_n (b/a;q)_n / (q;q)_n (sign*a)^n, written as prod (a - b q^k) so a = 0 is allowed."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b, q = map(to_complex, (a, b, q))
    check_q(q)
    if abs(a) >= 1:
        raise DomainError(f"|a| = {float(abs(a)):.6g} >= 1")
    r = abs(q)

    def step(n):
        return sign * (a - b * q**n) / (1 - q ** (n + 1))

    def bound(n):
        rho = (abs(a) + abs(b) * r**n) / (1 - r ** (n + 1))
        return rho if rho < 1 else None

    return sum_series(_ratio_series(mpc(1), step, bound), tol, max_terms, "q-binomial series")
