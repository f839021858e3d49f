"""Working-precision configuration.

All numerics run on mpmath's ``mp`` context.  Library functions use whatever
precision is active when they are called; the harness and CLI enter
:func:`working_precision` once per computation so the setting is captured at
computation start and never changes mid-flight.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from mpmath import mp, mpc, mpf, mpmathify

DEFAULT_DIGITS = 50
ENV_VAR = "QCF_PRECISION"


def default_digits() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw:
        digits = int(raw)
        if digits < 15:
            raise ValueError(f"{ENV_VAR}={raw} is below the supported minimum of 15")
        return digits
    return DEFAULT_DIGITS


@contextmanager
def working_precision(digits: int | None = None):
    """Run the enclosed block at ``digits`` significant decimal digits."""
    with mp.workdps(digits if digits is not None else default_digits()):
        yield mp.dps


def digits() -> int:
    return mp.dps


def exclusion_radius() -> mpf:
    """Distance below which a value counts as hitting a forbidden point: 10^(-P/2)."""
    return mpf(10) ** (-(mp.dps // 2))


def roundoff_floor() -> mpf:
    """Magnitude below which a computed coefficient is taken to be exactly zero.

    Coefficients of q-fractions decay geometrically, so the pole radius
    10^(-P/2) would misread legitimate late coefficients as zeros; only
    values at the level of accumulated rounding error count.
    """
    return mpf(10) ** (-(mp.dps - 6))


def diff(x, y):
    """x - y, snapped to exactly 0 when the difference is pure cancellation.

    Coefficient rules build their factors with this so that a factor such as
    a - b q^k vanishes exactly when it should, while a coefficient that is
    merely small (q^n for large n) is never mistaken for zero.
    """
    d = x - y
    if abs(d) <= roundoff_floor() * max(abs(x), abs(y)):
        return mpc(0)
    return d


def default_tol() -> mpf:
    return mpf(10) ** (-mp.dps)


def to_complex(x) -> mpc:
    """Convert ints, floats, complex, strings like ``"0.3-0.1j"`` or mpmath
    numbers into an mpc at the current precision."""
    return mpc(mpmathify(x))


def to_real(x) -> mpf:
    return mpf(mpmathify(x))
