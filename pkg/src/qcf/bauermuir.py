"""The Bauer-Muir transformation and chained transformations.

Given b0 + K(a_n/b_n) and a modifying sequence w_n, the transformed fraction
has n-th approximant S_n(w_n) = (A_n + w_n A_{n-1}) / (B_n + w_n B_{n-1}).
With lambda_n = a_n - w_{n-1}(b_n + w_n) its coefficients are

    b0' = b0 + w0,  a1' = lambda_1,  b1' = b1 + w1,
    a_n' = a_{n-1} lambda_n / lambda_{n-1},
    b_n' = b_n + w_n - w_{n-2} lambda_n / lambda_{n-1}     (n >= 2).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

from mpmath import mp, mpc, mpf

from .cfengine import CFSpec, approximant, evaluate, modified_approximant, shift_cf
from .errors import BMDegenerate
from .families import F_FAMILY
from .precision import exclusion_radius, roundoff_floor, to_complex

# Eagerly materialized lambdas, so an obviously degenerate transform fails at
# construction rather than deep inside an evaluation.
PRECHECK = 8


class ModifyingSequence:
    """A rule n >= 0 -> w_n with a label and a per-precision cache."""

    def __init__(self, rule: Callable[[int], object], name: str = ""):
        self._rule = rule
        self.name = name
        self._cache: dict = {}

    def __call__(self, n: int) -> mpc:
        if n < 0:
            raise IndexError("w_n is defined for n >= 0")
        key = (n, mp.prec)
        if key not in self._cache:
            self._cache[key] = to_complex(self._rule(n))
        return self._cache[key]

    def __repr__(self):
        return f"ModifyingSequence({self.name or '<anonymous>'})"

    @classmethod
    def zero(cls) -> "ModifyingSequence":
        return cls(lambda n: 0, "zero")


@dataclass(frozen=True)
class BMResult:
    transformed: CFSpec
    lam: Callable[[int], mpc]
    source: CFSpec
    w: ModifyingSequence


def _lambda_terms(cf: CFSpec, w: ModifyingSequence, n: int):
    return cf.a(n), w(n - 1) * (cf.b(n) + w(n))


def _lambda(cf: CFSpec, w: ModifyingSequence, n: int) -> mpc:
    a, correction = _lambda_terms(cf, w, n)
    return a - correction


def lambda_sequence(cf: CFSpec, w: ModifyingSequence, N: int) -> list:
    """lambda_1..lambda_N; zero values are returned, not raised."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [_lambda(cf, w, n) for n in range(1, N + 1)]


def bauer_muir(cf: CFSpec, w: ModifyingSequence) -> BMResult:
    """Transform ``cf`` by ``w``.  Raises BMDegenerate(n) if some lambda_n ~ 0.

    lambda_n = a_n - w_{n-1}(b_n + w_n) is typically a small difference of
    O(1) terms (for the Theorem 4.1 chains it decays like q^n), so it is
    evaluated with twice the digits active at construction and then rounded.
    The guard is fixed here, so nested chains do not escalate it.
    """
    guard = 2 * mp.dps
    cache: dict = {}

    def lam(n, radius=None):
        key = (n, mp.prec)
        if key in cache and radius is None:
            return cache[key]
        if w(n - 1) == 0:
            # lambda_n = a_n exactly; skipping the guard keeps w = 0 bit-exact.
            value = cf.a(n)
            if value == 0:
                raise BMDegenerate(n)
            cache[key] = value
            return value
        with mp.workdps(max(guard, mp.dps)):
            a, correction = _lambda_terms(cf, w, n)
            value = a - correction
            # Relative test: only the head is held to the exclusion radius;
            # later indices are degenerate only at the rounding floor.
            if radius is None:
                radius = roundoff_floor()
            if abs(value) <= radius * max(abs(a), abs(correction)):
                raise BMDegenerate(n)
        value = +value
        cache[key] = value
        return value

    def num(n):
        if n == 1:
            return lam(1)
        # Grouped so that w = 0 (lambda = a) reproduces a_n bit for bit.
        return lam(n) * (cf.a(n - 1) / lam(n - 1))

    def den(n):
        if n == 1:
            return cf.b(1) + w(1)
        return cf.b(n) + w(n) - w(n - 2) * lam(n) / lam(n - 1)

    top = PRECHECK if cf.length is None else min(PRECHECK, cf.length)
    for n in range(1, top + 1):
        lam(n, exclusion_radius())
    transformed = CFSpec(
        cf.b0 + w(0),
        num,
        den,
        name=f"bm({cf.name},{w.name})",
        params=cf.params,
        length=cf.length,
    )
    return BMResult(transformed, lam, cf, w)


@dataclass
class BMCheck:
    deviations: list
    max_deviation: mpf
    passed: bool


def _rel(x, y):
    return abs(x - y) / max(1, abs(y))


def bm_approximant_check(cf: CFSpec, w: ModifyingSequence, N: int, tol) -> BMCheck:
    """Compare f_n of the transform with S_n(w_n) of ``cf`` for n = 0..N."""
    transformed = bauer_muir(cf, w).transformed
    devs = [_rel(approximant(transformed, n), modified_approximant(cf, n, w(n))) for n in range(N + 1)]
    worst = max(devs)
    return BMCheck(devs, worst, bool(worst < mpf(tol)))


# -- chains --------------------------------------------------------------------


@dataclass
class ChainStep:
    step: int
    b: mpc  # frozen denominator (final b_step of the result)
    a: mpc  # frozen numerator (final a_{step+1})
    tail: CFSpec  # remaining fraction, whose b0 is not yet final


@dataclass
class ChainReport:
    steps: list = field(default_factory=list)

    @property
    def prefix(self):
        """[(b_0, a_1), (b_1, a_2), ...] as frozen so far."""
        return [(s.b, s.a) for s in self.steps]


def _assemble(prefix, tail: CFSpec, name: str, params) -> CFSpec:
    k = len(prefix)
    if k == 0:
        return tail
    bs = [b for b, _ in prefix]
    as_ = [a for _, a in prefix]
    return CFSpec(
        bs[0],
        lambda n: as_[n - 1] if n <= k else tail.a(n - k),
        lambda n: bs[n] if n < k else tail.b(n - k),
        name=name,
        params=params,
        length=None if tail.length is None else tail.length + k,
    )


def bm_chain(cf: CFSpec, w_family: Callable[[int], ModifyingSequence], steps: int, peel: int = 1):
    """Apply ``steps`` Bauer-Muir transformations, freezing a head each time.

    Step i transforms the current tail with ``w_family(i)``, freezes the
    leading denominator and the first ``peel`` partial numerators (only
    ``peel=1`` is used by the presets), and continues with what remains.
    Returns the partially converted fraction and a :class:`ChainReport`.
    """
    if peel != 1:
        raise NotImplementedError("only single-quotient peeling is supported")
    report = ChainReport()
    current = cf
    prefix: list = []
    for i in range(steps):
        try:
            new = bauer_muir(current, w_family(i)).transformed
        except BMDegenerate as exc:
            raise BMDegenerate(exc.index, step=i) from None
        b_frozen, a_frozen = new.b0, new.a(1)
        current = shift_cf(new, 1)
        prefix.append((b_frozen, a_frozen))
        report.steps.append(ChainStep(i, b_frozen, a_frozen, current))
    return _assemble(prefix, current, f"chain{steps}({cf.name})", cf.params), report


def tail_offsets(report: ChainReport, target: CFSpec, tol, n_max: int = 2000) -> list:
    """f_n = value(tail after n steps) - d_n, the quantity whose limit must avoid -1."""
    out = []
    for n, step in enumerate(report.steps, start=1):
        rep = evaluate(step.tail, tol, n_max)
        out.append(rep.value - target.b(n) if rep.converged else None)
    return out


# -- Theorem 4.1 presets -------------------------------------------------------


@dataclass(frozen=True)
class ChainPreset:
    """A named chain: source/target families plus the modifying sequences.

    ``w_family(point)`` returns the rule i -> ModifyingSequence for that
    parameter point; ``peel`` is the number of partial numerators frozen per
    step.
    """

    name: str
    source: str
    target: str
    w_family: Callable
    peel: int = 1
    description: str = ""

    def build(self, point, which: str) -> CFSpec:
        builder = F_FAMILY[self.source if which == "source" else self.target]
        return builder(point["q"], point["a"], point["b"], point["lam"], terminate=False)


def _f1f2(p):
    q, a, b = (to_complex(p[k]) for k in ("q", "a", "b"))

    def family(i):
        return ModifyingSequence(
            lambda n: (a if n % 2 == 0 else b) * q ** (n // 2 + 1 + i),
            f"thm41-f1f2[{i}]",
        )

    return family


def _f2f3(p):
    q, b = to_complex(p["q"]), to_complex(p["b"])

    def family(i):
        return ModifyingSequence(lambda n: -b * q**n, f"thm41-f2f3[{i}]")

    return family


def _f3f4(p):
    q, a, b = (to_complex(p[k]) for k in ("q", "a", "b"))

    def family(i):
        return ModifyingSequence(lambda n: b * q**i - a * q ** (n + 1), f"thm41-f3f4[{i}]")

    return family


def _f4f1(p):
    q, a, b = (to_complex(p[k]) for k in ("q", "a", "b"))

    def family(i):
        j = i // 2
        if i % 2 == 0:
            return ModifyingSequence(lambda n: 0, f"thm41-f4f1[{i}]")
        return ModifyingSequence(
            lambda n: a * q ** (j + 1) - b * q ** (n + j + 1),
            f"thm41-f4f1[{i}]",
        )

    return family


PRESETS = {
    p.name: p
    for p in (
        ChainPreset("thm41-f1f2", "f1", "f2", _f1f2,
                    description="w_2n = a q^(n+1+i), w_2n+1 = b q^(n+1+i)"),
        ChainPreset("thm41-f2f3", "f2", "f3", _f2f3, description="w_n = -b q^n"),
        ChainPreset("thm41-f3f4", "f3", "f4", _f3f4, description="w_n = b q^i - a q^(n+1)"),
        ChainPreset("thm41-f4f1", "f4", "f1", _f4f1,
                    description="even steps w = 0; odd steps w_n = a q^(j+1) - b q^(n+j+1), j = i//2"),
    )
}


def get_preset(name: str) -> ChainPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown chain preset {name!r}; choose from {sorted(PRESETS)}") from None


def theorem41_excluded(point, n_max: int = 60, margin=None) -> str | None:
    """Name the Theorem 4.1 exclusion violated by ``point`` (None if clean).

    lam != a b q^n, lam != -b / q^n, lam != -a / q^(n-1) for n >= 1, and
    a, b, lam not all zero.  ``margin`` defaults to the exclusion radius.
    """
    q, a, b, lam = (to_complex(point[k]) for k in ("q", "a", "b", "lam"))
    margin = exclusion_radius() if margin is None else mpf(margin)
    if max(abs(a), abs(b), abs(lam)) < margin:
        return "a = b = lam = 0"
    for n in range(1, n_max + 1):
        qn = q**n
        if abs(lam - a * b * qn) < margin:
            return f"lam = ab q^{n}"
        # lam q^n + b = 0 and lam q^(n-1) + a = 0, written without division.
        if abs(lam * qn + b) < margin * max(1, abs(qn)):
            return f"lam = -b/q^{n}"
        if abs(lam * q ** (n - 1) + a) < margin * max(1, abs(q ** (n - 1))):
            return f"lam = -a/q^{n - 1}"
    return None
