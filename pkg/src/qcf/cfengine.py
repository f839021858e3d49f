"""Continued fractions b0 + K(a_n / b_n): convergents, modified approximants,
tails, equivalence transformations and convergence detection.

A :class:`CFSpec` stores coefficient *rules* rather than arrays, so the same
object describes an infinite fraction; coefficients are materialized lazily
and memoized per (index, precision).
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Iterator

from mpmath import mp, mpc, mpf

from .errors import SingularModification, SpecError
from .precision import exclusion_radius, to_complex

Rule = Callable[[int], object]


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __bool__(self):
        return False


DIVERGED = _Sentinel("DIVERGED")
NOT_SEPARATE = _Sentinel("NOT_SEPARATE")


@dataclass(frozen=True, eq=False)
class CFSpec:
    """b0 + a1/(b1 + a2/(b2 + ...)) given by index rules n >= 1 -> a_n, b_n.

    ``length`` makes the fraction finite.  With ``terminate_on_zero`` an
    a_n equal to zero ends the fraction at n-1 instead of raising SpecError,
    which is how naturally terminating fractions are encoded.  Zero means
    exactly zero: rules produce it through :func:`~qcf.precision.diff`, so
    tiny but genuine coefficients are never cut off.
    """

    b0: object
    numerator: Rule
    denominator: Rule
    name: str = ""
    params: Mapping = field(default_factory=dict)
    length: int | None = None
    terminate_on_zero: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "b0", to_complex(self.b0))

    def _coeff(self, kind, n):
        key = (kind, n, mp.prec)
        try:
            return self._cache[key]
        except KeyError:
            pass
        rule = self.numerator if kind == "a" else self.denominator
        value = to_complex(rule(n))
        self._cache[key] = value
        return value

    def a(self, n: int) -> mpc:
        value = self._coeff("a", n)
        if value == 0 and not self.terminate_on_zero:
            raise SpecError(f"{self.name or 'continued fraction'}: a_{n} = 0", index=n)
        return value

    def b(self, n: int) -> mpc:
        return self.b0 if n == 0 else self._coeff("b", n)

    def effective_length(self, limit: int) -> int | None:
        """Number of partial quotients if the fraction ends at or before ``limit``."""
        top = limit if self.length is None else min(limit, self.length)
        if self.terminate_on_zero:
            for n in range(1, top + 1):
                if self._coeff("a", n) == 0:
                    return n - 1
        if self.length is not None and self.length <= limit:
            return self.length
        return None

    def coefficients(self, n_max: int):
        """List of (a_n, b_n) for n = 1..n_max (shorter if the fraction is finite)."""
        end = self.effective_length(n_max)
        top = n_max if end is None else end
        return [(self.a(n), self.b(n)) for n in range(1, top + 1)]

    def with_rules(self, **changes) -> "CFSpec":
        fields = dict(
            b0=self.b0,
            numerator=self.numerator,
            denominator=self.denominator,
            name=self.name,
            params=self.params,
            length=self.length,
            terminate_on_zero=self.terminate_on_zero,
        )
        fields.update(changes)
        return CFSpec(**fields)


@dataclass(frozen=True)
class ConvergentPair:
    n: int
    A: mpc
    B: mpc

    @property
    def value(self) -> mpc:
        return self.A / self.B


@dataclass
class ConvergenceReport:
    value: object  # mpc or DIVERGED
    n_used: int
    residual: mpf
    separate: tuple | None = None
    flags: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.value is not DIVERGED


@dataclass
class SeparateLimits:
    """Outcome of :func:`separate_limits`; ``A``/``B`` are None when not separate."""

    A: mpc | None
    B: mpc | None
    n_used: int
    flags: list = field(default_factory=list)

    @property
    def separate(self) -> bool:
        return self.A is not None

    def __iter__(self):
        return iter((self.A, self.B))


@dataclass
class TailCheck:
    ok: bool
    bad_index: int | None
    max_deviation: mpf


# -- convergents -------------------------------------------------------------


def iter_convergents(cf: CFSpec, n_max: int | None = None, renormalize: bool = False) -> Iterator:
    """Yield (n, A_n, B_n, A_{n-1}, B_{n-1}) from the three-term recurrence.

    With ``renormalize`` the four numbers are rescaled by a common factor
    whenever max(|A_n|, |B_n|) leaves [10^(-P/2), 10^(P/2)]; ratios and
    modified approximants are unaffected.
    """
    big = mpf(10) ** (mp.dps // 2)
    small = 1 / big
    A_prev, B_prev = mpc(1), mpc(0)
    A, B = cf.b0, mpc(1)
    yield 0, A, B, A_prev, B_prev
    end = cf.effective_length(n_max) if n_max is not None else None
    top = n_max if end is None else end
    n = 0
    while top is None or n < top:
        n += 1
        if top is None and cf.length is not None and n > cf.length:
            return
        an = cf.a(n)
        if cf.terminate_on_zero and an == 0:
            return
        bn = cf.b(n)
        A, A_prev = bn * A + an * A_prev, A
        B, B_prev = bn * B + an * B_prev, B
        if renormalize:
            size = max(abs(A), abs(B))
            if size > big or (0 < size < small):
                scale = 1 / size
                A, A_prev, B, B_prev = A * scale, A_prev * scale, B * scale, B_prev * scale
        yield n, A, B, A_prev, B_prev


def convergents(cf: CFSpec, n_max: int) -> list[ConvergentPair]:
    """Unscaled (A_n, B_n) for n = 0..n_max with A_{-1}=1, A_0=b0, B_{-1}=0, B_0=1."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return [ConvergentPair(n, A, B) for n, A, B, _, _ in iter_convergents(cf, n_max)]


def approximant(cf: CFSpec, n: int) -> mpc:
    """f_n = A_n / B_n."""
    return modified_approximant(cf, n, 0)


def modified_approximant(cf: CFSpec, n: int, w) -> mpc:
    """S_n(w) = (A_n + w A_{n-1}) / (B_n + w B_{n-1})."""
    w = to_complex(w)
    row = None
    for row in iter_convergents(cf, n, renormalize=True):
        pass
    m, A, B, A_prev, B_prev = row
    if m < n:
        raise ValueError(f"fraction terminates after {m} partial quotients; S_{n} undefined")
    den = B + w * B_prev
    if abs(den) < exclusion_radius() * max(1, abs(B), abs(w * B_prev)):
        raise SingularModification(f"B_{n} + w B_{n - 1} vanishes")
    return (A + w * A_prev) / den


# -- convergence detection ---------------------------------------------------


def _residual(x, y):
    return abs(x - y) / max(1, abs(x))


def _detect_limit(values: Iterator, tol, n_max) -> ConvergenceReport:
    """Two-step Cauchy detector over a stream of (n, value-or-None).

    None marks an index whose denominator sits in the zero-exclusion radius;
    such indices are skipped.  A stream that ends before ``n_max`` belongs to
    a finite fraction and its last value is exact.
    """
    tol = mpf(tol)
    huge = mpf(10) ** (mp.dps // 2)
    flags: list = []
    history: list = []
    residuals: list = []
    n = 0
    last_value = None
    for n, value in values:
        if value is None:
            if "B-near-zero" not in flags:
                flags.append("B-near-zero")
            continue
        last_value = value
        history.append(value)
        if len(history) >= 3:
            r1 = _residual(history[-1], history[-2])
            r2 = _residual(history[-1], history[-3])
            residuals.append(r1)
            if r1 < tol and r2 < tol:
                return ConvergenceReport(value, n, r1, flags=flags)
            if r2 < tol <= r1 and "oscillation" not in flags:
                flags.append("oscillation")
            del history[0]
        if abs(value) > huge and "infinite-limit" not in flags:
            flags.append("infinite-limit")
    if last_value is not None and n < n_max:
        flags.append("terminated")
        return ConvergenceReport(last_value, n, mpf(0), flags=flags)
    final = residuals[-1] if residuals else mpf("inf")
    if len(residuals) >= 20 and min(residuals[-10:]) < min(residuals[-20:-10]) / 10:
        flags.append("slow-convergence")
    flags.append("not-converged")
    return ConvergenceReport(DIVERGED, n, final, flags=flags)


def evaluate(cf: CFSpec, tol, n_max: int = 2000) -> ConvergenceReport:
    """First approximant f_n with |f_n - f_{n-1}| and |f_n - f_{n-2}| both below
    ``tol`` (relative to max(1, |f_n|)).

    Indices whose B_n falls inside the zero-exclusion radius are skipped.  A
    finite fraction returns its exact last approximant with flag "terminated".
    """
    radius = exclusion_radius()

    def stream():
        for n, A, B, _, _ in iter_convergents(cf, n_max, renormalize=True):
            if abs(B) < radius * max(1, abs(A)):
                yield n, None
            else:
                yield n, A / B

    report = _detect_limit(stream(), tol, n_max)
    end = cf.effective_length(n_max)
    if end is not None and end == n_max and report.value is DIVERGED:
        row = list(iter_convergents(cf, end, renormalize=True))[-1]
        report.value = row[1] / row[2]
        report.residual = mpf(0)
        report.flags = [f for f in report.flags if f != "not-converged"] + ["terminated"]
    return report


def evaluate_modified(cf: CFSpec, w: Rule, tol, n_max: int = 2000) -> ConvergenceReport:
    """Limit of the modified approximants S_n(w_n), detected like :func:`evaluate`."""
    radius = exclusion_radius()

    def stream():
        for n, A, B, A_prev, B_prev in iter_convergents(cf, n_max, renormalize=True):
            wn = to_complex(w(n))
            den = B + wn * B_prev
            if abs(den) < radius * max(1, abs(B)):
                yield n, None
            else:
                yield n, (A + wn * A_prev) / den

    return _detect_limit(stream(), tol, n_max)


def separate_limits(cf: CFSpec, tol, n_max: int = 2000) -> SeparateLimits:
    """Cauchy-detect lim A_n and lim B_n on the *unscaled* convergents.

    Growth past 10^(P/2) or exhaustion of ``n_max`` gives NOT_SEPARATE.  Both
    limits vanishing is reported as not separate with flag "A=B=0".
    """
    tol = mpf(tol)
    huge = mpf(10) ** (mp.dps // 2)
    hist: list = []
    n = 0
    for n, A, B, _, _ in iter_convergents(cf, n_max):
        if max(abs(A), abs(B)) > huge:
            return SeparateLimits(None, None, n, ["unbounded"])
        hist.append((A, B))
        if len(hist) >= 3:
            ok = all(
                _residual(hist[-1][i], hist[-2][i]) < tol and _residual(hist[-1][i], hist[-3][i]) < tol
                for i in (0, 1)
            )
            if ok:
                A_lim, B_lim = hist[-1]
                if max(abs(A_lim), abs(B_lim)) < exclusion_radius():
                    return SeparateLimits(None, None, n, ["A=B=0"])
                return SeparateLimits(A_lim, B_lim, n)
            del hist[0]
    end = cf.effective_length(n_max)
    if end is not None and n >= end and hist:
        return SeparateLimits(hist[-1][0], hist[-1][1], n, ["terminated"])
    return SeparateLimits(None, None, n, ["not-converged"])


# -- structural transformations ----------------------------------------------


def tail_cf(cf: CFSpec, n: int) -> CFSpec:
    """The right tail K_{k>n}(a_k/b_k) as a fraction with b0 = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return CFSpec(
        0,
        lambda k: cf.a(n + k),
        lambda k: cf.b(n + k),
        name=f"tail{n}({cf.name})",
        params=cf.params,
        length=None if cf.length is None else max(cf.length - n, 0),
        terminate_on_zero=cf.terminate_on_zero,
    )


def shift_cf(cf: CFSpec, n: int) -> CFSpec:
    """b_n + K_{k>n}(a_k/b_k): the tail with its leading denominator kept."""
    shifted = tail_cf(cf, n)
    return shifted.with_rules(b0=cf.b(n), name=f"shift{n}({cf.name})")


def check_tail_sequence(cf: CFSpec, g: Rule, N: int, tol) -> TailCheck:
    """Check g_n = a_{n+1} / (b_{n+1} + g_{n+1}) for n = 0..N-1."""
    tol = mpf(tol)
    worst = mpf(0)
    for n in range(N):
        gn, gn1 = to_complex(g(n)), to_complex(g(n + 1))
        rhs = cf.a(n + 1) / (cf.b(n + 1) + gn1)
        dev = _residual(gn, rhs)
        worst = max(worst, dev)
        if dev >= tol:
            return TailCheck(False, n, worst)
    return TailCheck(True, None, worst)


def equivalence_transform(cf: CFSpec, r: Rule) -> CFSpec:
    """a_n' = r_n r_{n-1} a_n, b_n' = r_n b_n with r_0 = 1; every approximant is kept."""

    def rr(n):
        if n == 0:
            return mpc(1)
        value = to_complex(r(n))
        if abs(value) < exclusion_radius():
            raise SpecError(f"equivalence factor r_{n} = 0", index=n)
        return value

    return CFSpec(
        cf.b0,
        lambda n: rr(n) * rr(n - 1) * cf.a(n),
        lambda n: rr(n) * cf.b(n),
        name=f"equiv({cf.name})",
        params=cf.params,
        length=cf.length,
        terminate_on_zero=cf.terminate_on_zero,
    )


def reciprocal_cf(cf: CFSpec, numerator=1) -> CFSpec:
    """numerator / (b0 + K(a_n/b_n)) written as 0 + K(a'_n/b'_n)."""
    numerator = to_complex(numerator)
    return CFSpec(
        0,
        lambda n: numerator if n == 1 else cf.a(n - 1),
        lambda n: cf.b(n - 1),
        name=f"recip({cf.name})",
        params=cf.params,
        length=None if cf.length is None else cf.length + 1,
        terminate_on_zero=cf.terminate_on_zero,
    )


def finite_cf(b0, pairs, name="") -> CFSpec:
    """A fraction with the explicit partial quotients ``pairs = [(a_1, b_1), ...]``."""
    pairs = [(to_complex(a), to_complex(b)) for a, b in pairs]
    return CFSpec(
        b0,
        lambda n: pairs[n - 1][0],
        lambda n: pairs[n - 1][1],
        name=name,
        length=len(pairs),
    )
