"""Cycle search under explicit budgets, canonical form, and least-term certificates.

A cycle of period k with k1 expanding steps has product lam = above^k1*below^k2,
and its least member cannot exceed C = const*k1/|ln lam|; every found cycle is
checked against that bound.  Search walks each start with a remembered visited
set; starts that neither close nor hit a known cycle within budget are
reported as undetermined, never as acyclic.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp

from .mappings import MappingSpec, apply_map, is_permutation
from .nodes import FactorSystem, UnsupportedMappingError, condition_C, factor_system_for, ln_lambda


class CycleError(ValueError):
    """Raised for member lists that do not form a cycle."""


@dataclass(frozen=True)
class SearchBudget:
    """Per-start limits: applied steps and magnitude cutoff on |value|."""

    max_steps: int = 10_000
    max_magnitude: int = 10**18

    def __post_init__(self) -> None:
        if self.max_steps < 1 or self.max_magnitude < 1:
            raise ValueError("budget limits must be positive")


@dataclass(frozen=True)
class ConditionCertificate:
    """Least-term bound check: m is the member of least |value|, holds = (|m| <= C)."""

    m: int
    C: mpmath.mpf
    constant: Fraction
    holds: bool


@dataclass(frozen=True)
class CycleRecord:
    """A cycle rotated to start at its signed minimum, with branch counts and certificate."""

    members: tuple[int, ...]
    k: int
    branch_counts: tuple[int, int]  # (k1 expanding, k2 contracting)
    lambda_sign: str  # 'below-1' | 'above-1' | 'unit'
    certificate: Optional[ConditionCertificate] = None

    @property
    def k1(self) -> int:
        return self.branch_counts[0]

    @property
    def k2(self) -> int:
        return self.branch_counts[1]


@dataclass(frozen=True)
class CycleSearchResult:
    """Found cycles (canonically sorted) plus starts the budget could not decide."""

    cycles: tuple[CycleRecord, ...]
    undetermined: tuple[int, ...]
    budget: SearchBudget


def canonicalize(spec: MappingSpec, members) -> CycleRecord:
    """Validate a member list as a cycle and rotate its signed minimum first."""
    members = tuple(int(v) for v in members)
    if not members:
        raise CycleError("empty member list")
    if len(set(members)) != len(members):
        raise CycleError("cycle members must be pairwise distinct")
    for a, b in zip(members, members[1:] + members[:1]):
        if apply_map(spec, a) != b:
            raise CycleError(f"not a cycle: {a} maps to {apply_map(spec, a)}, expected {b}")
    pivot = members.index(min(members))
    members = members[pivot:] + members[:pivot]

    lam = Fraction(1)
    k1 = k2 = 0
    for v in members:
        f = Fraction(spec.branch_for(v).multiplier, spec.d)
        lam *= f
        if abs(f) > 1:
            k1 += 1
        elif abs(f) < 1:
            k2 += 1
    if abs(lam) < 1:
        sign = "below-1"
    elif abs(lam) > 1:
        sign = "above-1"
    else:
        sign = "unit"
    return CycleRecord(members=members, k=len(members), branch_counts=(k1, k2), lambda_sign=sign)


def certify(
    spec: MappingSpec,
    record: CycleRecord,
    constant: Optional[Fraction] = None,
    dps: int = 50,
) -> ConditionCertificate:
    """Check the cycle's least |member| against C = constant*k1/|ln lam|.

    k1 = 0 only happens for the all-contracting fixed point 0; its bound is
    C = 0, formally holding but vacuous.
    """
    factors = factor_system_for(spec, par=constant)
    if constant is not None:
        factors = replace(factors, constant=Fraction(constant))
    k1, k2 = record.branch_counts
    if factors.above**k1 * factors.below**k2 == 1:
        raise CycleError("cycle product lam = 1 admits no bound")
    m = min(record.members, key=abs)
    with mp.workdps(dps):
        if k1 == 0:
            return ConditionCertificate(m=m, C=mp.mpf(0), constant=factors.constant,
                                        holds=abs(m) == 0)
        bound = condition_C(k1, abs(ln_lambda(factors, k1, k2, dps)), factors.constant, dps)
        return ConditionCertificate(m=m, C=bound.C, constant=factors.constant,
                                    holds=abs(m) <= bound.C)


def find_cycles(
    spec: MappingSpec,
    start_range: tuple[int, int],
    budget: Optional[SearchBudget] = None,
    constant: Optional[Fraction] = None,
    dps: int = 50,
) -> CycleSearchResult:
    """Search every start in the inclusive range for cycles, certifying each find.

    Deterministic: starts ascend, results sort by canonical members.  Values
    proven to reach a known cycle are memoized so overlapping trajectories are
    walked once.  Certificates are omitted when the mapping has no two-factor
    bound (and no constant was supplied).
    """
    budget = budget or SearchBudget()
    lo, hi = int(start_range[0]), int(start_range[1])
    if lo > hi:
        raise CycleError(f"empty start range [{lo}, {hi}]")
    certifiable = True
    try:
        factor_system_for(spec, par=constant)
    except UnsupportedMappingError:
        certifiable = False
    perm = is_permutation(spec)

    on_cycle: dict[int, tuple[int, ...]] = {}
    leads_to: dict[int, tuple[int, ...]] = {}
    found: dict[tuple[int, ...], CycleRecord] = {}
    undetermined: list[int] = []

    for start in range(lo, hi + 1):
        x = start
        seen: dict[int, int] = {}
        path: list[int] = []
        outcome: Optional[tuple[int, ...]] = None
        for step in range(budget.max_steps + 1):
            if x in seen:
                members = tuple(path[seen[x]:])
                if perm:
                    # a bijection's trajectories cannot merge, so the first
                    # revisit must close at the start
                    assert x == start, f"revisit of {x} != start {start} under a permutation"
                rec = canonicalize(spec, members)
                if rec.members not in found:
                    if certifiable:
                        rec = replace(rec, certificate=certify(spec, rec, constant, dps))
                    found[rec.members] = rec
                outcome = rec.members
                break
            if x in on_cycle:
                outcome = on_cycle[x]
                break
            if x in leads_to:
                outcome = leads_to[x]
                break
            if abs(x) > budget.max_magnitude or step == budget.max_steps:
                break
            seen[x] = len(path)
            path.append(x)
            x = apply_map(spec, x)
        if outcome is None:
            undetermined.append(start)
        else:
            member_set = set(outcome)
            for v in path:
                (on_cycle if v in member_set else leads_to)[v] = outcome

    cycles = tuple(sorted(found.values(), key=lambda r: (abs(r.members[0]), r.members[0] < 0)))
    return CycleSearchResult(cycles=cycles, undetermined=tuple(undetermined), budget=budget)
