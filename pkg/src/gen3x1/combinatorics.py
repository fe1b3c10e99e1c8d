"""Counting trajectory classes and their average spacing.

Among d^k consecutive starts, eta(d, k1, k2) = C(k, k2)*(d-1)^k1 of them
share a branch split of k1 non-divisible and k2 divisible steps; the class
members are spaced R = d^k/(eta+1) apart on average over the period d^k.
For large k, ln R is evaluated through Stirling- or Ramanujan-approximated
log-factorials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp

EXACT_FACTORIAL_LIMIT = 10**6

R_MODES = ("exact", "stirling", "ramanujan")


def eta(d: int, k1: int, k2: int) -> int:
    """Number of length-(k1+k2) classes: C(k, k2) * (d-1)^k1, exact."""
    _check_split(d, k1, k2)
    return math.comb(k1 + k2, k2) * (d - 1) ** k1


def _check_split(d: int, k1: int, k2: int) -> None:
    if d < 2:
        raise ValueError(f"modulus must be >= 2, got {d}")
    if k1 < 0 or k2 < 0:
        raise ValueError(f"branch counts must be >= 0, got k1={k1}, k2={k2}")


@lru_cache(maxsize=4096)
def _exact_log_factorial(n: int, dps: int):
    # integer factorial is exact but costs ~2 s around n = 5*10^5; loggamma at
    # guard precision agrees to the working digits and stays in microseconds
    with mp.workdps(dps + 10):
        v = mp.log(math.factorial(n)) if n <= 10_000 else mp.loggamma(n + 1)
    with mp.workdps(dps):
        return +v


def log_factorial(n: int, mode: str = "exact", dps: int = 50):
    """ln n! under the given mode; ln 0! is 0 in every mode.

    exact: log of the exact integer factorial (n <= 10^6).
    stirling: n ln n - n + (1/2) ln(2 pi n).
    ramanujan: n ln n - n + (1/6) ln(8n^3 + 4n^2 + n + 1/30) + (1/2) ln pi.
    """
    if n < 0:
        raise ValueError(f"factorial argument must be >= 0, got {n}")
    if mode not in R_MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {R_MODES}")
    if n == 0:
        return mp.mpf(0)
    if mode == "exact":
        if n > EXACT_FACTORIAL_LIMIT:
            raise ValueError(
                f"exact log-factorial limited to n <= {EXACT_FACTORIAL_LIMIT}, got {n}"
            )
        return _exact_log_factorial(n, dps)
    with mp.workdps(dps):
        x = mp.mpf(n)
        if mode == "stirling":
            return x * mp.log(x) - x + mp.log(2 * mp.pi * x) / 2
        return (
            x * mp.log(x)
            - x
            + mp.log(8 * x**3 + 4 * x**2 + x + mp.mpf(1) / 30) / 6
            + mp.log(mp.pi) / 2
        )


@dataclass(frozen=True)
class RepartitionValue:
    """ln R for a class, with the mode that actually produced it."""

    ln_R: mpmath.mpf
    mode: str
    eta: int | None = None  # exact class count when it was computed


def repartition(d: int, k1: int, k2: int, mode: str = "exact", dps: int = 50) -> RepartitionValue:
    """Average spacing ln R = ln(d^k/(eta+1)) exactly, or its Stirling/Ramanujan form.

    The asymptotic modes drop the +1:
    ln R ~ k ln d - k1 ln(d-1) - (ln k! - ln k1! - ln k2!).
    Exact mode keeps eta+1 as an integer while it is small enough to matter at
    the working precision; past that it switches to exact log-factorials, and
    beyond n = 10^6 falls back to Ramanujan (reported in `mode`).
    """
    _check_split(d, k1, k2)
    if mode not in R_MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {R_MODES}")
    k = k1 + k2
    if mode == "exact":
        # cheap double-precision estimate of ln eta decides the path
        ln_eta_est = (
            math.lgamma(k + 1) - math.lgamma(k1 + 1) - math.lgamma(k2 + 1) + k1 * math.log(d - 1)
            if k1 or k2
            else 0.0
        )
        if ln_eta_est <= math.log(10) * (dps + 10):
            e = eta(d, k1, k2)
            with mp.workdps(dps):
                return RepartitionValue(k * mp.log(d) - mp.log(e + 1), "exact", e)
        if k <= EXACT_FACTORIAL_LIMIT:
            # +1 is below the working precision here; exact log-factorials
            lf = lambda n: log_factorial(n, "exact", dps)
            with mp.workdps(dps):
                ln_eta = lf(k) - lf(k1) - lf(k2) + k1 * mp.log(d - 1)
                return RepartitionValue(k * mp.log(d) - ln_eta, "exact", None)
        mode = "ramanujan"
    lf = lambda n: log_factorial(n, mode, dps)
    with mp.workdps(dps):
        ln_eta = lf(k) - lf(k1) - lf(k2) + k1 * mp.log(d - 1)
        return RepartitionValue(k * mp.log(d) - ln_eta, mode, None)
