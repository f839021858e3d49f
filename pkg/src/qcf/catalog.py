"""Registry of the identities: domains, both sides, citations, and a sampler.

Each :class:`IdentityRecord` has a left side that is a series or product
evaluator (or, for fraction-versus-fraction identities, a continued fraction)
and a right side that is a continued fraction or another evaluator.  The
harness evaluates both and compares.

Domains are lists of :class:`Constraint` objects.  Each returns a *slack*
that is positive when the inequality holds; verification needs slack > 0,
while the sampler demands slack >= ``sample_margin`` so that sampled points
stay away from boundaries where series or fractions converge arbitrarily
slowly.
"""

from __future__ import annotations

import cmath
import math
import random
from collections.abc import Callable
from dataclasses import dataclass, field

from mpmath import expj, mpc, mpf

from . import families as fam
from .bauermuir import theorem41_excluded
from .cfengine import CFSpec, reciprocal_cf
from .errors import SamplingExhausted, UnknownIdentity
from .precision import exclusion_radius
from .qseries import (
    INFINITY,
    ParameterPoint,
    SeriesResult,
    G_fn,
    _ratio_series,
    bailey_daum_rhs,
    hirschhorn_H,
    jackson_rhs,
    phi21,
    qbinomial_ratio,
    qpoch_multi,
    sum_series,
)

MAX_TRIES = 2000
THM41_MARGIN = 1e-3


@dataclass(frozen=True)
class Constraint:
    text: str
    slack: Callable[[ParameterPoint], object]
    sample_margin: float = 1e-3


@dataclass(frozen=True)
class Side:
    """One side of an identity: ``kind`` is "value" (returns SeriesResult) or
    "cf" (returns CFSpec)."""

    kind: str
    build: Callable


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    params: tuple
    constraints: tuple
    lhs: Side
    rhs: Side
    citation: str
    domain_text: str
    notes: str = ""
    # Sampler ranges: symbol -> (min modulus, max modulus).
    ranges: dict = field(default_factory=dict)
    real_q: bool = False
    # For limits of modified approximants: point -> fixed w.
    modification: Callable | None = None
    sampler: Callable | None = None
    # Real-valued symbols (drawn with zero phase).
    real_symbols: tuple = ()

    def violations(self, point, margin: bool = False) -> list:
        """Texts of the constraints ``point`` fails (with sampling margins if asked)."""
        bad = []
        for c in self.constraints:
            need = c.sample_margin if margin else 0
            if not mpf(c.slack(point)) > need:
                bad.append(c.text)
        return bad

    def domain(self, point) -> bool:
        return not self.violations(point)


# -- side helpers --------------------------------------------------------------


def _val(value, terms=0, bound=0) -> SeriesResult:
    return SeriesResult(mpc(value), terms, mpf(bound))


def _prod(values, q, tol=None) -> SeriesResult:
    """(values; q)_oo with an absolute error bound."""
    r = qpoch_multi(values, q, INFINITY, tol)
    return _val(r.value, r.terms_used, abs(r.value) * r.tail_bound)


def _div(x: SeriesResult, y: SeriesResult) -> SeriesResult:
    v = x.value / y.value
    bound = abs(v) * (x.tail_bound / max(abs(x.value), mpf(10) ** -300) + y.tail_bound / abs(y.value))
    return _val(v, x.terms_used + y.terms_used, bound)


def _mul(x: SeriesResult, y: SeriesResult) -> SeriesResult:
    v = x.value * y.value
    return _val(v, x.terms_used + y.terms_used, abs(x.value) * y.tail_bound + abs(y.value) * x.tail_bound)


def _add(x: SeriesResult, y: SeriesResult, sign=1) -> SeriesResult:
    return _val(x.value + sign * y.value, x.terms_used + y.terms_used, x.tail_bound + y.tail_bound)


def _scale(x: SeriesResult, k) -> SeriesResult:
    return _val(k * x.value, x.terms_used, abs(k) * x.tail_bound)


def _G(a, lam, b, q, tol, max_terms):
    return G_fn(a, lam, b, q, tol, max_terms)


def g_ratio(p, tol=None, max_terms=10_000) -> SeriesResult:
    """G(a,lam;b;q) / G(aq,lam q;b;q)."""
    q, a, b, lam = p["q"], p["a"], p["b"], p["lam"]
    return _div(_G(a, lam, b, q, tol, max_terms), _G(a * q, lam * q, b, q, tol, max_terms))


def g_ratio_inverse(p, tol=None, max_terms=10_000) -> SeriesResult:
    q, a, b, lam = p["q"], p["a"], p["b"], p["lam"]
    return _div(_G(a * q, lam * q, b, q, tol, max_terms), _G(a, lam, b, q, tol, max_terms))


def phi_ratio(p, tol=None, max_terms=10_000) -> SeriesResult:
    """2phi1(a,b;c;q;z) / 2phi1(a,bq;cq;q;z)."""
    a, b, c, q, z = (p[k] for k in "abcqz")
    return _div(phi21(a, b, c, q, z, tol, max_terms), phi21(a, b * q, c * q, q, z, tol, max_terms))


def _lacunary(term, tol, max_terms, what):
    """Sum term(n) for n >= 0 where |term(m)| <= |term(n)| * rho_n^(m-n);
    ``term`` returns (value, rho_n)."""

    def gen():
        n = 0
        while True:
            t, rho = term(n)
            yield t, abs(t) * rho / (1 - rho) if rho < 1 else None
            n += 1

    return sum_series(gen(), tol, max_terms, what)


def ser3_sum(q, tol=None, max_terms=10_000) -> SeriesResult:
    """sum_n (-1)^n q^(n(3n+2)) (1 + q^(2n+1))."""
    r = abs(q)

    def term(n):
        t = (-1) ** n * q ** (n * (3 * n + 2)) * (1 + q ** (2 * n + 1))
        # |t_{m+1}| / |t_m| <= r^(6m+5) (1+r^(2m+3)) / (1-r^(2m+1)) <= 2 r^(6n+5)/(1-r) for m >= n
        return t, 2 * r ** (6 * n + 5) / (1 - r)

    return _lacunary(term, tol, max_terms, "ser3 sum")


def ser3b_sum(q, tol=None, max_terms=10_000) -> SeriesResult:
    """1 - sum_{n>=1} q^(n(3n-1)/2) (1 - q^n)."""
    r = abs(q)

    def term(n):
        if n == 0:
            return mpc(1), mpf(2) * r / (1 - r)
        t = -(q ** (n * (3 * n - 1) // 2)) * (1 - q**n)
        return t, 2 * r ** (3 * n + 1) / (1 - r)

    return _lacunary(term, tol, max_terms, "ser3b sum")


def slater_sum(q, shift: int, tol=None, max_terms=10_000) -> SeriesResult:
    """sum_n (-q;q^2)_n q^(n^2 + shift*n) / (q^4;q^4)_n with shift in {0, 2}."""
    r = abs(q)

    def step(n):
        return (1 + q ** (2 * n + 1)) * q ** (2 * n + 1 + shift) / (1 - q ** (4 * n + 4))

    def bound(n):
        return (1 + r ** (2 * n + 1)) * r ** (2 * n + 1 + shift) / (1 - r ** (4 * n + 4))

    return sum_series(_ratio_series(mpc(1), step, bound), tol, max_terms, "Slater sum")


def ram_products(p, tol=None) -> SeriesResult:
    """((-a,b;q) - (a,-b;q)) / ((-a,b;q) + (a,-b;q))."""
    a, b, q = p["a"], p["b"], p["q"]
    x = _prod([-a, b], q, tol)
    y = _prod([a, -b], q, tol)
    return _div(_add(x, y, -1), _add(x, y))


def entry12_product(a, b, q, tol=None) -> SeriesResult:
    q4 = q**4
    return _div(_prod([a * a * q, b * b * q], q4, tol), _prod([a * a * q**3, b * b * q**3], q4, tol))


# -- constraint helpers -------------------------------------------------------


def _lt(text, f, bound=1, margin=1e-3):
    """|f(p)| < bound."""
    return Constraint(text, lambda p: bound - abs(f(p)), margin)


def _gt(text, f, bound=1, margin=1e-3):
    return Constraint(text, lambda p: abs(f(p)) - bound, margin)


Q_UNIT = _lt("|q| < 1", lambda p: p["q"], 1, 0.5)
def _thm41_sampling(p) -> bool:
    return theorem41_excluded(p, margin=THM41_MARGIN) is None


# -- builders -----------------------------------------------------------------

GPARAMS = ("q", "a", "b", "lam")
R_G = {"q": (0.05, 0.5), "a": (0.05, 0.7), "b": (0.05, 0.7), "lam": (0.05, 0.7)}
R_PHI = {"q": (0.05, 0.5), "a": (0.05, 0.7), "b": (0.05, 0.7), "c": (0.05, 0.7), "z": (0.05, 0.5)}


def _fcf(name):
    builder = fam.F_FAMILY[name]
    return lambda p: builder(p["q"], p["a"], p["b"], p["lam"])


def _records():
    R = []

    def add(*args, **kwargs):
        R.append(IdentityRecord(*args, **kwargs))

    v = lambda f: Side("value", f)  # noqa: E731
    cf = lambda f: Side("cf", f)  # noqa: E731

    # -- G-quotients ----------------------------------------------------------
    add("gcf1", GPARAMS, (Q_UNIT,),
        v(lambda p, t, m: g_ratio_inverse(p, t, m)),
        cf(lambda p: reciprocal_cf(_fcf("f1")(p)).with_rules(name="gcf1")),
        "Ramanujan, lost notebook p. 41 [gcf1]; inverted form [cor1cf]",
        "|q| < 1",
        "G(aq,lam q;b)/G(a,lam;b) = 1/(1 + (aq+lam q)/1 + (bq+lam q^2)/1 + ...). "
        "The inverted statement G(a)/G(aq) = 1 + K(...) holds for all |q| < 1.",
        R_G, real_q=True)
    add("gcf2", GPARAMS, (Q_UNIT, _lt("|aq| < 1", lambda p: p["a"] * p["q"])),
        v(lambda p, t, m: g_ratio_inverse(p, t, m)),
        cf(lambda p: reciprocal_cf(_fcf("f4")(p)).with_rules(name="gcf2")),
        "Ramanujan, lost notebook p. 43 [gcf2]",
        "|q| < 1, |aq| < 1",
        "Requires |aq| < 1; the fraction 1/(1 + (aq+lam q)/(1-aq+bq) + ...) converges to "
        "the wrong value or diverges otherwise.",
        R_G, real_q=True)
    add("gcf3", GPARAMS, (Q_UNIT,),
        v(lambda p, t, m: g_ratio_inverse(p, t, m)),
        cf(lambda p: reciprocal_cf(_fcf("f2")(p)).with_rules(name="gcf3")),
        "Ramanujan, lost notebook p. 43; Bhargava-Adiga [gcf3]",
        "|q| < 1",
        "1/(1 + aq + (lam q - ab q^2)/(1 + bq + aq^2) + ...).",
        R_G, real_q=True)
    add("gcf4", GPARAMS, (Q_UNIT, _lt("|b| < 1", lambda p: p["b"])),
        cf(_fcf("f1")),
        cf(_fcf("f3")),
        "Hirschhorn's fraction equated with the first G-fraction [gcf4]",
        "|q| < 1, |b| < 1",
        "Fraction-versus-fraction identity; holds for |b| < 1.",
        R_G, real_q=True)
    add("hirschhorn-gablq", GPARAMS, (Q_UNIT, _lt("|b| < 1", lambda p: p["b"])),
        v(lambda p, t, m: g_ratio(p, t, m)),
        cf(_fcf("f3")),
        "Hirschhorn's fraction for G(a,lam;b)/G(aq,lam q;b) [gablqhirsch]",
        "|q| < 1, |b| < 1",
        "G(a,lam;b)/G(aq,lam q;b) = 1 - b + aq + (lam q + b)/(1 - b + aq^2) + ...",
        R_G, real_q=True)
    add("hirschhorn-gh", GPARAMS, (Q_UNIT, _lt("|b| < 1", lambda p: p["b"])),
        v(lambda p, t, m: g_ratio(p, t, m)),
        v(lambda p, t, m: _div(
            hirschhorn_H(-p["b"], p["a"] * p["q"], p["lam"], p["q"], t, m),
            hirschhorn_H(-p["b"], p["a"] * p["q"] ** 2, p["lam"] * p["q"], p["q"], t, m))),
        "G-quotient as a quotient of Hirschhorn's H",
        "|q| < 1, |b| < 1",
        "G(a,lam;b)/G(aq,lam q;b) = H(-b,aq,lam,q)/H(-b,aq^2,lam q,q).",
        R_G, real_q=True)
    add("hirschhorn1974", ("a", "b", "c", "x"),
        (_lt("|x| < 1", lambda p: p["x"], 1, 0.5), _lt("|a| < 1", lambda p: p["a"])),
        v(lambda p, t, m: _div(hirschhorn_H(p["a"], p["b"], p["c"], p["x"], t, m),
                               hirschhorn_H(p["a"], p["b"] * p["x"], p["c"] * p["x"], p["x"], t, m))),
        cf(lambda p: fam.hirschhorn_cf(p["a"], p["b"], p["c"], p["x"])),
        "Hirschhorn (1974)",
        "|x| < 1, |a| < 1",
        "1 + a + b + (cx - a)/(1 + a + bx) + ... = H(a,b,c,x)/H(a,bx,cx,x).",
        {"x": (0.05, 0.5), "a": (0.05, 0.7), "b": (0.05, 0.7), "c": (0.05, 0.7)}, real_q=True)
    add("cor2cf", GPARAMS, (Q_UNIT,),
        v(lambda p, t, m: g_ratio(p, t, m)),
        cf(lambda p: fam.cor2_cf(p["q"], p["a"], p["b"], p["lam"])),
        "G-quotient from the two-step Heine fraction [cor2cf]",
        "|q| < 1",
        "Obtained from the heine2 fraction with c = 0, where |c/b| < 1 holds trivially.",
        R_G, real_q=True)

    # -- 2phi1 quotients -------------------------------------------------------
    phi_common = (Q_UNIT, _lt("|z| < 1", lambda p: p["z"], 1, 0.3))
    add("heine", tuple("abcqz"), phi_common,
        v(lambda p, t, m: phi_ratio(p, t, m)),
        cf(lambda p: fam.heine_cf(*(p[k] for k in "abcqz"))),
        "Heine's continued fraction [hcf], coefficients [hcfa1]/[hcfa2]",
        "|q| < 1, |z| < 1",
        "c must avoid q^(-m); the sampler keeps |c| < 1.",
        R_PHI)
    add("heine2", tuple("abcqz"), phi_common + (_lt("|c/b| < 1", lambda p: p["c"] / p["b"], 1, 0.2),),
        v(lambda p, t, m: phi_ratio(p, t, m)),
        cf(lambda p: fam.heine2_cf(*(p[k] for k in "abcqz"))),
        "Two-fold Heine transformation fraction [hcf2]",
        "|q| < 1, |z| < 1, |c/b| < 1",
        "|c/b| < 1 is enforced strictly, although it may only be needed for the "
        "intermediate transformed series.",
        R_PHI)
    add("heine-iterate", tuple("abcqz"),
        phi_common + (_lt("|c/b| < 1", lambda p: p["c"] / p["b"], 1, 0.2),
                      _gt("c != 0", lambda p: p["c"], 0, 1e-3)),
        v(lambda p, t, m: phi_ratio(p, t, m)),
        v(lambda p, t, m: _scale(
            _div(phi21(p["a"] * p["b"] * p["z"] / p["c"], p["b"], p["b"] * p["z"], p["q"], p["c"] / p["b"], t, m),
                 phi21(p["a"] * p["b"] * p["z"] / p["c"], p["b"] * p["q"], p["b"] * p["q"] * p["z"], p["q"],
                       p["c"] / p["b"], t, m)),
            (1 - p["b"] * p["z"]) / (1 - p["c"]))),
        "Second iterate of the Heine transformation [eqnstar]",
        "|q| < 1, |z| < 1, |c/b| < 1",
        "Numeric consistency of the two 2phi1 quotients.",
        R_PHI)
    add("jackson", tuple("abcqz"), phi_common + (_gt("b != 0", lambda p: p["b"], 0, 1e-3),),
        v(lambda p, t, m: phi21(*(p[k] for k in "abcqz"), t, m)),
        v(lambda p, t, m: jackson_rhs(*(p[k] for k in "abcqz"), t, m)),
        "Jackson's transformation [hjeq]",
        "|q| < 1, |z| < 1, b != 0",
        "",
        R_PHI)

    def u_of(p):
        return p["a"] * p["z"] / p["q"]

    thm25_lhs = v(lambda p, t, m: _scale(phi_ratio(p, t, m), 1 - p["c"]))
    thm25_cf = cf(lambda p: fam.thm25_cf(*(p[k] for k in "abcqz")))
    add("thm25i", tuple("abcqz"), phi_common + (_lt("|az/q| < 1", u_of, 1, 0.2),),
        thm25_lhs, thm25_cf,
        "Theorem 2.5(i) [2phi1eq31]",
        "|q| < 1, |z| < 1, |az/q| < 1",
        "(1-c) 2phi1(a,b;c;z)/2phi1(a,bq;cq;z) as an ordinary continued fraction limit.",
        R_PHI)
    add("thm25ii", tuple("abcqz"),
        phi_common + (Constraint("|az/q| = 1", lambda p: exclusion_radius() - abs(abs(u_of(p)) - 1), 0),
                      _gt("az/q != 1", lambda p: u_of(p) - 1, 0, 0.3),
                      _lt("|z| <= 0.8 (sampling only)", lambda p: p["z"], 1, 0.2)),
        thm25_lhs, thm25_cf,
        "Theorem 2.5(ii) [2phi1eq3105]",
        "|q| < 1, |z| < 1, |az/q| = 1, az/q != 1",
        "Limit of the modified approximants (A_n - (az/q) A_{n-1})/(B_n - (az/q) B_{n-1}); "
        "the ordinary approximants need not converge. No rate is known.",
        R_PHI,
        modification=lambda p: -u_of(p),
        sampler=_sample_thm25ii)
    add("thm25iii", tuple("abcqz"), phi_common + (_gt("|az/q| > 1", u_of, 1, 0.2),),
        v(lambda p, t, m: _scale(
            _div(phi21(p["q"] / p["a"], p["c"] / p["a"], p["b"] * p["q"] / p["a"], p["q"], p["q"] / p["z"], t, m),
                 phi21(p["q"] / p["a"], p["c"] * p["q"] / p["a"], p["b"] * p["q"] ** 2 / p["a"], p["q"],
                       p["q"] / p["z"], t, m)),
            u_of(p) * (1 - p["b"] * p["q"] / p["a"]))),
        thm25_cf,
        "Theorem 2.5(iii) [2phi1eq311]",
        "|q| < 1, |z| < 1, |az/q| > 1",
        "Same fraction as thm25i; the left side uses the series in q/z.",
        {"q": (0.05, 0.3), "a": (0.3, 0.7), "b": (0.05, 0.7), "c": (0.05, 0.7), "z": (0.3, 0.8)})

    # -- single-variable corollaries -----------------------------------------
    R_Q = {"q": (0.05, 0.5)}
    add("mod6", ("q",), (Q_UNIT,),
        v(lambda p, t, m: _div(_prod([p["q"] ** 3, p["q"] ** 3], p["q"] ** 6, t),
                               _prod([p["q"], p["q"] ** 5], p["q"] ** 6, t))),
        cf(lambda p: fam.mod6_cf(p["q"])),
        "Modulus-6 product quotient [mod6coreq]",
        "|q| < 1",
        "cor2cf with q -> q^2, a = 1/q, b = lam = 1.",
        R_Q, real_q=True)

    def slater_rhs(p, shift, t):
        q = p["q"]
        q6 = q**6
        first = [q**3, q**3, q6] if shift == 0 else [q, q**5, q6]
        return _mul(_prod(first, q6, t), _div(_prod([-q], q * q, t), _prod([q * q], q * q, t)))

    for shift, name in ((0, "mod6-slater1"), (2, "mod6-slater2")):
        add(name, ("q",), (Q_UNIT,),
            v(lambda p, t, m, s=shift: slater_sum(p["q"], s, t, m)),
            v(lambda p, t, m, s=shift: slater_rhs(p, s, t)),
            "Slater list, series = product [mod6prodseq]",
            "|q| < 1",
            "The series is G(1/q,1;1;q^2)" if shift == 0 else "The series is G(q,q^2;1;q^2)",
            R_Q, real_q=True)
    add("ser3", ("q",), (Q_UNIT,),
        v(lambda p, t, m: ser3_sum(p["q"], t, m)),
        cf(lambda p: fam.ser3_cf(p["q"])),
        "Theta-type series as a q-fraction [ser3cor2eq]",
        "|q| < 1",
        "cor2cf inverted, q -> q^2, a = -1/q, b = -1, lam = 1.",
        R_Q, real_q=True)
    add("ser3-series", ("q",), (Q_UNIT,),
        v(lambda p, t, m: _div(_G(-p["q"], p["q"] ** 2, -1, p["q"] ** 2, t, m),
                               _G(-1 / p["q"], 1, -1, p["q"] ** 2, t, m))),
        v(lambda p, t, m: ser3_sum(p["q"], t, m)),
        "Andrews-Berndt, Lost Notebook I, Cor. 6.2.9 [ser3eq]",
        "|q| < 1",
        "",
        R_Q, real_q=True)
    add("ser3b", ("q",), (Q_UNIT,),
        v(lambda p, t, m: ser3b_sum(p["q"], t, m)),
        cf(lambda p: fam.ser3b_cf(p["q"])),
        "Pentagonal-type series as a q-fraction [ser3cor2eq2]",
        "|q| < 1",
        "cor2cf inverted, q -> q^2, a = 1/q, b = 1, lam = 1/q.",
        R_Q, real_q=True)
    add("ser3b-series", ("q",), (Q_UNIT,),
        v(lambda p, t, m: _series_ser3b_g(p, t, m)),
        v(lambda p, t, m: ser3b_sum(p["q"], t, m)),
        "Andrews-Berndt, Lost Notebook I, Cor. 6.2.11 [ser3eq22]",
        "|q| < 1",
        "Holds as 2/(1 + G(1/q,1/q;1;q^2)/G(q,q;1;q^2)); the quotient with numerator "
        "and denominator exchanged does not match the series.",
        R_Q, real_q=True)

    # -- section 3 ---------------------------------------------------------------
    R_AB = {"q": (0.05, 0.5), "a": (0.05, 0.7), "b": (0.05, 0.7)}
    add("bailey-daum", ("a", "b", "q"),
        (Q_UNIT, _lt("|q/b| < 1", lambda p: p["q"] / p["b"], 1, 0.2)),
        v(lambda p, t, m: phi21(p["a"], p["b"], p["a"] * p["q"] / p["b"], p["q"], -p["q"] / p["b"], t, m)),
        v(lambda p, t, m: _val_from(bailey_daum_rhs(p["a"], p["b"], p["q"], t))),
        "Bailey-Daum summation [bdeq]",
        "|q| < 1, |q/b| < 1",
        "",
        {"q": (0.05, 0.5), "a": (0.05, 0.7), "b": (0.3, 2.0)})

    def lemma_phis(p, t, m):
        a, b, q = p["a"], p["b"], p["q"]
        top = phi21(a, b, a / (b * q), q, -1 / b, t, m)
        bot = phi21(a, b * q, a / b, q, -1 / b, t, m)
        return top, bot

    def lemma_lhs(p, t, m):
        top, bot = lemma_phis(p, t, m)
        return _add(_div(top, bot), _val(1), -1)

    def lemma_rhs(p, t, m):
        a, b, q = p["a"], p["b"], p["q"]
        ratio = _div(_prod([a, a / (b * b * q)], q * q, t), _prod([a * q, a / (b * b)], q * q, t))
        return _scale(ratio, 1 / (1 - a / (b * q)))

    def diff_lhs(p, t, m):
        top, bot = lemma_phis(p, t, m)
        return _add(top, bot, -1)

    def diff_rhs(p, t, m):
        a, b, q = p["a"], p["b"], p["q"]
        num = _mul(_prod([-q], q, t), _prod([a, a / (b * b * q)], q * q, t))
        return _scale(_div(num, _prod([a / b, -1 / b], q, t)), 1 / (1 - a / (b * q)))

    lemma_cons = (Q_UNIT, _gt("|b| > 1", lambda p: p["b"], 1, 0.2),
                  _gt("a/(bq) != 1", lambda p: p["a"] / (p["b"] * p["q"]) - 1, 0, 0.05))
    R_L = {"q": (0.05, 0.5), "a": (0.05, 0.7), "b": (1.25, 4.0)}
    add("lemma31", ("a", "b", "q"), lemma_cons, v(lemma_lhs), v(lemma_rhs),
        "2phi1 quotient at z = -1/b [2phi1prlem]",
        "|q| < 1, |b| > 1",
        "", R_L)
    add("lemma31-diff", ("a", "b", "q"), lemma_cons, v(diff_lhs), v(diff_rhs),
        "Difference form of the 2phi1 lemma [2phi1diffeq]",
        "|q| < 1, |b| > 1",
        "", R_L)

    def entry12_lhs(p, t, m):
        a, b, q = p["a"], p["b"], p["q"]
        if abs(a * b) < 1:
            return entry12_product(a, b, q, t)
        return _scale(entry12_product(1 / a, 1 / b, q, t), -a * b)

    add("entry12", ("a", "b", "q"),
        (Q_UNIT, Constraint("|ab| != 1", lambda p: abs(abs(p["a"] * p["b"]) - 1), 0.05)),
        v(entry12_lhs),
        cf(lambda p: fam.entry12_cf(p["a"], p["b"], p["q"])),
        "Ramanujan, Second Notebook, Ch. 16, Entry 12 [cframentry12]",
        "|q| < 1, |ab| != 1",
        "Two branches: |ab| < 1 gives (a^2q,b^2q;q^4)/(a^2q^3,b^2q^3;q^4); |ab| > 1 gives "
        "-ab times the same with (1/a,1/b). Also exact when a = b q^(2k+1) and the fraction "
        "terminates. Odd seeds sample the |ab| > 1 branch.",
        R_AB, sampler=_sample_entry12)
    add("entry12b", ("a", "b", "q"), (Q_UNIT, _lt("|qb/a| < 1", lambda p: p["q"] * p["b"] / p["a"], 1, 0.2)),
        v(lambda p, t, m: entry12_product(p["a"], p["b"], p["q"], t)),
        cf(lambda p: fam.entry12b_cf(p["a"], p["b"], p["q"])),
        "Product quotient via Heine's fraction [cframentry12eq3]",
        "|q| < 1, |qb/a| < 1",
        "|qb/a| < 1 is sufficient; the identity may hold more widely (informational).",
        R_AB)
    add("entry12c", ("a", "b", "q"),
        (Q_UNIT, Constraint("|bq| < |a|", lambda p: abs(p["a"]) - abs(p["b"] * p["q"]), 0.02),
         Constraint("|a| < 1/|b|", lambda p: 1 / abs(p["b"]) - abs(p["a"]), 0.05)),
        v(lambda p, t, m: entry12_product(p["a"], p["b"], p["q"], t)),
        cf(lambda p: fam.entry12c_cf(p["a"], p["b"], p["q"])),
        "Product quotient via the two-fold Heine fraction [cframentry12eq2]",
        "|q| < 1, |bq| < |a| < 1/|b|",
        "The stated bounds may be relaxable (informational).",
        R_AB)
    ram_cons = (Q_UNIT, _lt("|a| < 1", lambda p: p["a"]))
    add("ram-t1", ("a", "b", "q"), ram_cons,
        v(lambda p, t, m: ram_products(p, t)),
        cf(lambda p: fam.ram_t1_cf(p["a"], p["b"], p["q"])),
        "Ramanujan, Second Notebook, Ch. 16, Entry 12 (product combination) [ramcort1eq]",
        "|q| < 1, |a| < 1",
        "Partial numerators -(a - bq^m)(b - aq^m) q^(m-1) for m >= 1.",
        R_AB)
    add("ram-t1b", ("a", "b", "q"),
        ram_cons + (_lt("|a^2| < 1", lambda p: p["a"] ** 2),
                    _lt("|ab/q| < 1", lambda p: p["a"] * p["b"] / p["q"], 1, 0.2)),
        v(lambda p, t, m: ram_products(p, t)),
        cf(lambda p: fam.ram_t1b_cf(p["a"], p["b"], p["q"])),
        "Product combination via Theorem 2.5(i) [ramcort1eq2]",
        "|q| < 1, |a^2| < 1, |ab/q| < 1",
        "Partial numerators -(a - bq^(2m))(b - aq^(2m)) q for every m >= 1. "
        "Restrictions may be relaxable (informational).",
        {"q": (0.2, 0.5), "a": (0.05, 0.7), "b": (0.05, 0.7)})
    add("ram-t1c", ("a", "b", "q"),
        ram_cons + (_lt("|a^2| < 1", lambda p: p["a"] ** 2),
                    _lt("|aq/b| < 1", lambda p: p["a"] * p["q"] / p["b"], 1, 0.2)),
        v(lambda p, t, m: ram_products(p, t)),
        cf(lambda p: fam.ram_t1c_cf(p["a"], p["b"], p["q"])),
        "Product combination via the two-fold Heine fraction [ramcort1eq3]",
        "|q| < 1, |a^2| < 1, |aq/b| < 1",
        "Restrictions may be relaxable (informational).",
        R_AB)

    def a_b_series(p, t, m, sign):
        a, b, q = p["a"], p["b"], p["q"]
        A = phi21(b * q / a, b / a, q, q * q, a * a, t, m)
        B = _scale(phi21(b * q / a, b * q * q / a, q**3, q * q, a * a, t, m), (a - b) / (1 - q))
        return _add(A, B, sign)

    for sign, name in ((1, "ram-t1-ab-plus"), (-1, "ram-t1-ab-minus")):
        add(name, ("a", "b", "q"),
            (Q_UNIT, _lt("|a| < 1", lambda p: p["a"]), _gt("a != 0", lambda p: p["a"], 0, 1e-3)),
            v(lambda p, t, m, s=sign: a_b_series(p, t, m, s)),
            v(lambda p, t, m, s=sign: _val_from(qbinomial_ratio(p["a"], p["b"], p["q"], s, t), True)),
            "A +/- B via the q-binomial theorem [BoverAeq]",
            "|q| < 1, |a| < 1",
            f"A {'+' if sign > 0 else '-'} B = ({'' if sign > 0 else '-'}b;q)_oo/"
            f"({'' if sign > 0 else '-'}a;q)_oo with A, B the two 2phi1 in base q^2.",
            R_AB)
    return R


def _val_from(res: SeriesResult, relative: bool = True) -> SeriesResult:
    """Turn a product result (relative bound) into an absolute-bound result."""
    return _val(res.value, res.terms_used, abs(res.value) * res.tail_bound if relative else res.tail_bound)


def _series_ser3b_g(p, t, m):
    q = p["q"]
    q2 = q * q
    ratio = _div(_G(1 / q, 1 / q, 1, q2, t, m), _G(q, q, 1, q2, t, m))
    value = 2 / (1 + ratio.value)
    return _val(value, ratio.terms_used, abs(value) ** 2 / 2 * ratio.tail_bound)


# -- sampling -------------------------------------------------------------------


def _draw(rng: random.Random, lo: float, hi: float, real: bool = False) -> complex:
    r = rng.uniform(lo, hi)
    if real:
        return complex(r, 0.0)
    return cmath.rect(r, rng.uniform(0.0, 2 * math.pi))


def _default_draw(rng, rec: IdentityRecord, real_q: bool) -> dict:
    values = {}
    for sym in rec.params:
        lo, hi = rec.ranges.get(sym, (0.05, 0.5) if sym in ("q", "x") else (0.05, 0.7))
        real = sym in rec.real_symbols or (real_q and sym in ("q", "x"))
        values[sym] = _draw(rng, lo, hi, real)
    return values


def _sample_entry12(rng, rec, real_q, seed):
    values = _default_draw(rng, rec, real_q)
    if seed % 2:
        values["a"], values["b"] = 1 / values["a"], 1 / values["b"]
    return values


def _sample_thm25ii(rng, rec, real_q, seed):
    """az/q = e^(i theta) exactly at working precision, theta away from 0."""
    q = _draw(rng, 0.05, 0.5, real_q)
    a = _draw(rng, abs(q) / 0.8, max(0.7, abs(q) / 0.8 + 0.05))
    theta = rng.uniform(0.3, 2 * math.pi - 0.3)
    z = mpc(q) / mpc(a) * expj(theta)
    return {"a": a, "b": _draw(rng, 0.05, 0.7), "c": _draw(rng, 0.05, 0.7), "q": q, "z": z}


_G_FAMILY_IDS = {"gcf1", "gcf2", "gcf3", "gcf4", "hirschhorn-gablq", "hirschhorn-gh", "cor2cf"}


def sample_point(id: str, seed: int, real_q: bool = False) -> ParameterPoint:
    """Deterministic admissible point for ``id``.

    The generator is ``random.Random(f"{id}:{seed}")`` (string seeding is
    stable across platforms and Python versions >= 3.2); moduli are uniform in
    the record's ranges and phases uniform in [0, 2 pi).  With ``real_q`` the
    base q (or x) is drawn real and positive.
    """
    rec = get(id)
    if real_q and not rec.real_q:
        raise ValueError(f"{id} has no real-q sampling preset")
    rng = random.Random(f"{id}:{seed}" + (":real" if real_q else ""))
    draw = rec.sampler or (lambda rng, rec, real_q, seed: _default_draw(rng, rec, real_q))
    for _ in range(MAX_TRIES):
        values = draw(rng, rec, real_q, seed)
        point = ParameterPoint(values)
        if rec.violations(point, margin=True):
            continue
        if rec.id in _G_FAMILY_IDS and not _thm41_sampling(point):
            continue
        return point
    raise SamplingExhausted(f"no admissible point for {id!r} (seed {seed}) after {MAX_TRIES} draws")


# -- registry -------------------------------------------------------------------

_REGISTRY = {r.id: r for r in _records()}


def list_identities() -> list:
    """[(id, citation, params), ...] in registry order."""
    return [(r.id, r.citation, r.params) for r in _REGISTRY.values()]


def get(id: str) -> IdentityRecord:
    try:
        return _REGISTRY[id]
    except KeyError:
        raise UnknownIdentity(id) from None


def ids() -> list:
    return list(_REGISTRY)


def export_text() -> str:
    """Plain-text dump of the registry, one block per identity."""
    blocks = []
    for r in _REGISTRY.values():
        lines = [
            f"id: {r.id}",
            f"citation: {r.citation}",
            f"params: {', '.join(r.params)}",
            f"domain: {r.domain_text}",
            f"sides: {r.lhs.kind} / {r.rhs.kind}" + (" (modified approximants)" if r.modification else ""),
        ]
        if r.notes:
            lines.append(f"notes: {r.notes}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def build_side(side: Side, point, tol=None, max_terms=10_000):
    """Evaluate a "value" side or build a "cf" side."""
    if side.kind == "cf":
        return side.build(point)
    return side.build(point, tol, max_terms)


__all__ = [
    "Constraint",
    "IdentityRecord",
    "Side",
    "export_text",
    "get",
    "ids",
    "list_identities",
    "sample_point",
    "build_side",
    "CFSpec",
]
