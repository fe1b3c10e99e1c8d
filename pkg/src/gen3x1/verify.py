"""Brute-force oracles for the symbol-sequence theorems.

Every window of d^k consecutive starts realizes each length-k symbol sequence
exactly once, and w_k(n) = w_k(n + d^k q) for every shift q.  The class with
k1 non-divisible and k2 divisible steps has eta(d, k1, k2) members per window.
These facts are checked by exhaustive enumeration with exact sequence keys.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .combinatorics import eta
from .mappings import MappingSpec, SymbolSequence, Trajectory, iterate, symbol_for_residue

ENUMERATION_LIMIT = 10**7


def _window_size(spec: MappingSpec, k: int, limit: int) -> int:
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    size = spec.d**k
    if size > limit:
        raise ValueError(f"window d^k = {size} exceeds the enumeration limit {limit}")
    return size


def _raw_symbols(spec: MappingSpec, n: int, k: int) -> tuple[int, ...]:
    # inner loop of the enumerations; avoids building Trajectory objects
    d = spec.d
    branches = [(b.multiplier, b.offset) for b in spec.branches]
    out = []
    x = n
    for _ in range(k):
        res = x % d
        out.append(symbol_for_residue(d, res))
        m, r = branches[res]
        x = (m * x - r) // d
    return tuple(out)


@dataclass(frozen=True)
class PeriodicityReport:
    """Outcome of the distinctness + periodicity check over one window."""

    d: int
    k: int
    window_start: int
    distinct_count: int
    expected: int
    periodic_samples_checked: int
    all_distinct: bool
    all_periodic: bool


def verify_periodicity(
    spec: MappingSpec,
    k: int,
    window_start: int = 1,
    samples: int = 32,
    limit: int = ENUMERATION_LIMIT,
    seed: int = 0,
) -> PeriodicityReport:
    """Enumerate w_k over [window_start, window_start + d^k) and test both theorems.

    Distinctness uses exact symbol tuples as keys; periodicity checks
    w_k(n) = w_k(n + d^k q) for `samples` random n in the window and random
    nonzero q in [-1000, 1000].
    """
    size = _window_size(spec, k, limit)
    seqs: set[tuple[int, ...]] = set()
    for n in range(window_start, window_start + size):
        seqs.add(_raw_symbols(spec, n, k))
    rng = random.Random(seed)
    periodic = True
    for _ in range(samples):
        n = rng.randrange(window_start, window_start + size)
        q = rng.randint(1, 1000) * rng.choice((-1, 1))
        if _raw_symbols(spec, n, k) != _raw_symbols(spec, n + size * q, k):
            periodic = False
    return PeriodicityReport(
        d=spec.d,
        k=k,
        window_start=window_start,
        distinct_count=len(seqs),
        expected=size,
        periodic_samples_checked=samples,
        all_distinct=len(seqs) == size,
        all_periodic=periodic,
    )


@dataclass(frozen=True)
class DistributionReport:
    """Observed class sizes over one window against the exact counts."""

    d: int
    k: int
    window_start: int
    observed: tuple[tuple[tuple[int, int], int], ...]  # ((k1, k2), count) ascending in k2
    expected: tuple[tuple[tuple[int, int], int], ...]
    match: bool


def verify_distribution(
    spec: MappingSpec,
    k: int,
    window_start: int = 1,
    limit: int = ENUMERATION_LIMIT,
) -> DistributionReport:
    """Count window members per (k1, k2) split and compare with eta."""
    size = _window_size(spec, k, limit)
    counts = {(k - k2, k2): 0 for k2 in range(k + 1)}
    for n in range(window_start, window_start + size):
        syms = _raw_symbols(spec, n, k)
        k2 = sum(1 for t in syms if t == 0)
        counts[(k - k2, k2)] += 1
    expected = {(k - k2, k2): eta(spec.d, k - k2, k2) for k2 in range(k + 1)}
    return DistributionReport(
        d=spec.d,
        k=k,
        window_start=window_start,
        observed=tuple(sorted(counts.items(), key=lambda kv: kv[0][1])),
        expected=tuple(sorted(expected.items(), key=lambda kv: kv[0][1])),
        match=counts == expected,
    )


def enumerate_class(
    spec: MappingSpec,
    k: int,
    k1: int,
    k2: int,
    window_start: int = 1,
    limit: int = ENUMERATION_LIMIT,
) -> list[tuple[Trajectory, SymbolSequence]]:
    """All window members whose split is (k1, k2), in increasing start order.

    Empty when k1 + k2 != k (no such class).
    """
    size = _window_size(spec, k, limit)
    if k1 < 0 or k2 < 0 or k1 + k2 != k:
        return []
    rows = []
    for n in range(window_start, window_start + size):
        syms = _raw_symbols(spec, n, k)
        if sum(1 for t in syms if t == 0) == k2:
            traj = iterate(spec, n, k)
            rows.append((traj, traj.symbols))
    return rows
