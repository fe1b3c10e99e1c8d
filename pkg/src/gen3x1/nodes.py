"""Successive-product walk through the record products PP*PG.

Over k steps a trajectory multiplies by lam = above^k1 * below^k2; a cycle
needs lam near 1, and its least member is bounded by C = const*k1/|ln lam|.
Multiplying the current closest product below 1 (PP) by the closest above 1
(PG) produces the record lam values.  The walk tracks Delta = |lam - 1| in
arbitrary-precision floats and the exponent pair (k1, k2) exactly; deltas can
always be recomputed from the exponents, which is also the escalation path
when a new delta falls under the cancellation guard.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp

from . import combinatorics
from .mappings import MappingSpec

PRECISION_HARD_CAP = 10**4


class PrecisionCapError(RuntimeError):
    """Raised when escalation would exceed the precision hard cap."""


class UnsupportedMappingError(ValueError):
    """Raised when a mapping does not reduce to a two-factor system."""


@dataclass(frozen=True)
class FactorSystem:
    """Two per-step factors below/above 1, the report base d, and the bound constant."""

    below: Fraction
    above: Fraction
    base: int
    constant: Fraction
    name: str = ""

    def __post_init__(self) -> None:
        if not 0 < self.below < 1:
            raise ValueError(f"below-factor must lie in (0, 1), got {self.below}")
        if self.above <= 1:
            raise ValueError(f"above-factor must exceed 1, got {self.above}")
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.constant <= 0:
            raise ValueError(f"bound constant must be positive, got {self.constant}")


COLLATZ_FACTORS = FactorSystem(
    below=Fraction(2, 3), above=Fraction(4, 3), base=3, constant=Fraction(7, 24), name="collatz"
)
THREE_X1_FACTORS = FactorSystem(
    below=Fraction(1, 2), above=Fraction(3, 2), base=2, constant=Fraction(5, 12), name="3x1"
)

# (base, below, above) -> proven bound constant
_KNOWN_CONSTANTS = {
    (3, Fraction(2, 3), Fraction(4, 3)): Fraction(7, 24),
    (2, Fraction(1, 2), Fraction(3, 2)): Fraction(5, 12),
}


def factor_system_for(spec: MappingSpec, par: Optional[Fraction] = None) -> FactorSystem:
    """Distill a mapping's branch factors m_i/d into a two-factor system."""
    factors = sorted({Fraction(b.multiplier, spec.d) for b in spec.branches})
    if any(f <= 0 for f in factors):
        raise UnsupportedMappingError("factor system needs positive branch multipliers")
    if len(factors) != 2:
        raise UnsupportedMappingError(
            f"mapping has {len(factors)} distinct branch factors, need exactly 2"
        )
    below, above = factors
    if not below < 1 < above:
        raise UnsupportedMappingError(
            f"branch factors {below}, {above} must straddle 1"
        )
    constant = _KNOWN_CONSTANTS.get((spec.d, below, above))
    if constant is None:
        if par is None:
            raise UnsupportedMappingError(
                "no proven bound constant for this mapping; supply one via par"
            )
        constant = Fraction(par)
    return FactorSystem(below=below, above=above, base=spec.d, constant=constant,
                        name=spec.name)


@dataclass(frozen=True)
class PrecisionConfig:
    """Working decimal digits, with doubling escalation under a hard cap."""

    decimal_digits: int = 50
    escalate: bool = True
    max_digits: int = PRECISION_HARD_CAP

    def __post_init__(self) -> None:
        if self.decimal_digits < 20:
            raise ValueError(f"need at least 20 decimal digits, got {self.decimal_digits}")
        if self.max_digits < self.decimal_digits:
            raise ValueError("max_digits below the starting precision")


@dataclass(frozen=True)
class NodeRecord:
    """One emitted product: position, side, delta, exact exponents, ln-scale metrics.

    The two seed rows (main=1) carry no metrics.
    """

    main: int
    secondary: int
    side: str  # 'PP' (lam < 1) or 'PG' (lam > 1)
    delta: mpmath.mpf
    k1: int
    k2: int
    k: int
    ln_C: Optional[mpmath.mpf] = None
    ln_R: Optional[mpmath.mpf] = None
    ln_P: Optional[mpmath.mpf] = None
    rs: Optional[mpmath.mpf] = None

    @property
    def is_seed(self) -> bool:
        return self.main == 1


@dataclass(frozen=True)
class NodesRun:
    """Full output of run_nodes: seeds first, then one record per product."""

    factors: FactorSystem
    records: tuple[NodeRecord, ...]
    r_mode: str
    digits_used: int

    @property
    def products(self) -> tuple[NodeRecord, ...]:
        return tuple(r for r in self.records if not r.is_seed)

    def record(self, main: int, secondary: int) -> NodeRecord:
        for r in self.records:
            if r.main == main and r.secondary == secondary and not r.is_seed:
                return r
        raise KeyError(f"no node {main}/{secondary} in this run")


def ln_lambda(factors: FactorSystem, k1: int, k2: int, dps: int = 50) -> mpmath.mpf:
    """ln(above^k1 * below^k2) from the exact exponents."""
    extra = 15 + len(str(max(k1, k2, 1)))
    with mp.workdps(dps + extra):
        v = k1 * mp.log(mp.mpf(factors.above.numerator) / factors.above.denominator) + \
            k2 * mp.log(mp.mpf(factors.below.numerator) / factors.below.denominator)
    with mp.workdps(dps):
        return +v


def delta_from_exponents(factors: FactorSystem, k1: int, k2: int, dps: int = 50) -> mpmath.mpf:
    """|lam - 1| recomputed from scratch; the escalation and audit path."""
    extra = 15 + len(str(max(k1, k2, 1)))
    with mp.workdps(dps + extra):
        v = abs(mp.expm1(ln_lambda(factors, k1, k2, dps + extra)))
    with mp.workdps(dps):
        return +v


@dataclass(frozen=True)
class ConditionBound:
    """The least-member bound and its logarithm."""

    C: mpmath.mpf
    ln_C: mpmath.mpf


def condition_C(k1: int, ln_lambda_abs, constant: Fraction, dps: int = 50) -> ConditionBound:
    """Least-member bound C = constant*k1/|ln lam|, with ln C."""
    if k1 < 1:
        raise ValueError(f"bound needs k1 >= 1, got {k1}")
    with mp.workdps(dps):
        ln_lambda_abs = mp.mpf(ln_lambda_abs)
        if ln_lambda_abs <= 0:
            raise ValueError("need |ln lam| > 0")
        constant = Fraction(constant)
        c = mp.mpf(constant.numerator) / constant.denominator
        value = c * k1 / ln_lambda_abs
        return ConditionBound(C=value, ln_C=mp.log(c) + mp.log(k1) - mp.log(ln_lambda_abs))


def delta_lambda_series(d_pp, d_pg, order: int = 6) -> mpmath.mpf:
    """Series for ln((1+dPG)(1-dPP)): sum_j ((-1)^(j+1) dPG^j - dPP^j)/j."""
    if order < 1:
        raise ValueError(f"series order must be >= 1, got {order}")
    d_pp, d_pg = mp.mpf(d_pp), mp.mpf(d_pg)
    total = mp.mpf(0)
    pp_pow = pg_pow = mp.mpf(1)
    for j in range(1, order + 1):
        pp_pow *= d_pp
        pg_pow *= d_pg
        sign = 1 if j % 2 else -1
        total += (sign * pg_pow - pp_pow) / j
    return total


def rs_exponent(delta, base: int = 3) -> mpmath.mpf:
    """Base-`base` exponent r (or s) with delta = base^(-r)."""
    delta = mp.mpf(delta)
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return -mp.log(delta) / mp.log(base)


@dataclass(frozen=True)
class TransitionClass:
    """Where the next product lands: case label plus the realized r, s, t exponents."""

    case: str  # regular-PP | regular-PG | preswitch-PP | preswitch-PG
    predicted_t_relation: str
    r: mpmath.mpf
    s: mpmath.mpf
    t: mpmath.mpf


def classify_transition(d_pp, d_pg, base: int = 3) -> TransitionClass:
    """Classify the product of the current deltas; rejects the equal-delta seed state.

    Regular case: the new exponent t lies strictly between r and s; preswitch
    case (right before a main-node change): t rises above both.
    """
    d_pp, d_pg = mp.mpf(d_pp), mp.mpf(d_pg)
    if d_pp == d_pg:
        raise ValueError("transition undefined for equal deltas (seed state)")
    signed = d_pg - d_pp - d_pp * d_pg
    side = "PP" if signed < 0 else "PG"
    new_delta = abs(signed)
    r = rs_exponent(d_pp, base)
    s = rs_exponent(d_pg, base)
    t = rs_exponent(new_delta, base)
    if new_delta > min(d_pp, d_pg):
        kind = "regular"
        relation = "s < t < r" if r > s else "r < t < s"
    else:
        kind = "preswitch"
        relation = "t > r > s" if r > s else "t > s > r"
    return TransitionClass(case=f"{kind}-{side}", predicted_t_relation=relation, r=r, s=s, t=t)


@dataclass(frozen=True)
class GapAnalysis:
    """Members forced between C and R: per-step counts and their total."""

    gap: mpmath.mpf  # ln R - ln C
    n_k1: int
    n_k2: int

    @property
    def total(self) -> int:
        return self.n_k1 + self.n_k2


def _half_up(x) -> int:
    return int(mp.floor(x + mp.mpf("0.5")))


def gap_analysis(ln_C, ln_R, factors: FactorSystem, dps: int = 50) -> GapAnalysis:
    """Minimum counts of expanding/contracting steps spanning ln R - ln C.

    Each count is the gap divided by that step's |ln factor|, rounded to the
    nearest integer and floored at 1 (a positive gap forces at least one step
    of each kind).
    """
    with mp.workdps(dps):
        gap = mp.mpf(ln_R) - mp.mpf(ln_C)
        if gap <= 0:
            raise ValueError("gap analysis needs ln R > ln C")
        ln_up = mp.log(mp.mpf(factors.above.numerator) / factors.above.denominator)
        ln_down = -mp.log(mp.mpf(factors.below.numerator) / factors.below.denominator)
        n_k1 = max(1, _half_up(gap / ln_up))
        n_k2 = max(1, _half_up(gap / ln_down))
        return GapAnalysis(gap=gap, n_k1=n_k1, n_k2=n_k2)


def _default_r_mode(factors: FactorSystem) -> str:
    # the d=2 table only matches Stirling-mode values; see README
    return "stirling" if factors.base == 2 else "exact"


def run_nodes(
    factors: FactorSystem,
    precision: Optional[PrecisionConfig] = None,
    r_mode: Optional[str] = None,
    max_main: int = 14,
    max_k: int = 10**7,
) -> NodesRun:
    """Walk the record products up to a main-node or exponent-sum limit.

    Each step multiplies the current PP and PG values, replacing the side the
    product lands on; the main index advances when the replaced side switches.
    Deltas are tracked at the configured precision with doubling escalation
    under the cancellation guard; exponent pairs are exact integers.
    """
    precision = precision or PrecisionConfig()
    if r_mode is None:
        r_mode = _default_r_mode(factors)
    if r_mode not in combinatorics.R_MODES:
        raise ValueError(f"unknown r_mode {r_mode!r}")
    if max_main < 1:
        raise ValueError(f"max_main must be >= 1, got {max_main}")
    if max_k < 1:
        raise ValueError(f"max_k must be >= 1, got {max_k}")

    digits = precision.decimal_digits
    with mp.workdps(digits):
        d_pp = 1 - mp.mpf(factors.below.numerator) / factors.below.denominator
        d_pg = mp.mpf(factors.above.numerator) / factors.above.denominator - 1
    e_pp, e_pg = (0, 1), (1, 0)

    records = [
        NodeRecord(main=1, secondary=1, side="PP", delta=d_pp, k1=0, k2=1, k=1),
        NodeRecord(main=1, secondary=1, side="PG", delta=d_pg, k1=1, k2=0, k=1),
    ]

    main, secondary = 1, 1
    prev_side: Optional[str] = None
    while True:
        with mp.workdps(digits):
            signed = d_pg - d_pp - d_pp * d_pg
            under_guard = abs(signed) < mp.mpf(10) ** (-(digits - 10))
        if precision.escalate and under_guard:
            if digits >= precision.max_digits:
                raise PrecisionCapError(
                    f"new delta under the cancellation guard at the {precision.max_digits}-digit cap"
                )
            # double the precision and re-anchor both deltas from their exact exponents
            digits = min(digits * 2, precision.max_digits)
            d_pp = delta_from_exponents(factors, e_pp[0], e_pp[1], digits)
            d_pg = delta_from_exponents(factors, e_pg[0], e_pg[1], digits)
            continue

        side = "PP" if signed < 0 else "PG"
        if prev_side is None:
            main, secondary = 2, 1
        elif side == prev_side:
            secondary += 1
        else:
            main, secondary = main + 1, 1
        if main > max_main:
            break
        prev_side = side

        exponents = (e_pp[0] + e_pg[0], e_pp[1] + e_pg[1])
        with mp.workdps(digits):
            delta = abs(signed)
            # sandwich: the product lands strictly inside (1 - dPP, 1 + dPG)
            assert delta < (d_pp if side == "PP" else d_pg)
            if side == "PP":
                d_pp, e_pp = delta, exponents
            else:
                d_pg, e_pg = delta, exponents

        records.append(_emit(factors, r_mode, digits, main, secondary, side, delta, exponents))
        if exponents[0] + exponents[1] >= max_k:
            break

    return NodesRun(factors=factors, records=tuple(records), r_mode=r_mode, digits_used=digits)


def _emit(
    factors: FactorSystem,
    r_mode: str,
    digits: int,
    main: int,
    secondary: int,
    side: str,
    delta,
    exponents: tuple[int, int],
) -> NodeRecord:
    k1, k2 = exponents
    k = k1 + k2
    with mp.workdps(digits):
        ln_lam = mp.log1p(delta) if side == "PG" else -mp.log1p(-delta)
        c = mp.mpf(factors.constant.numerator) / factors.constant.denominator
        ln_C = mp.log(c) + mp.log(k1) - mp.log(ln_lam)
        ln_P = k * mp.log(factors.base)
        rs = rs_exponent(delta, factors.base)
    ln_R = combinatorics.repartition(factors.base, k1, k2, r_mode, digits).ln_R
    return NodeRecord(
        main=main, secondary=secondary, side=side, delta=delta,
        k1=k1, k2=k2, k=k, ln_C=ln_C, ln_R=ln_R, ln_P=ln_P, rs=rs,
    )
