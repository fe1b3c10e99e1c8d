"""Piecewise-affine mappings T(x) = (m_i x - r_i)/d on the integers.

A mapping is given by a modulus d and one branch per residue class:
for x = i (mod d), T(x) = (m_i x - r_i)/d.  The congruence
r_i = i*m_i (mod d) makes every branch integer-valued.  Residues are
taken in [0, d), also for negative x.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping


class MappingError(ValueError):
    """Raised for malformed mapping definitions."""


@dataclass(frozen=True)
class BranchRule:
    """One branch x -> (multiplier*x - offset)/d for x = residue (mod d)."""

    residue: int
    multiplier: int
    offset: int


@dataclass(frozen=True)
class MappingSpec:
    """A complete mapping: modulus d plus one branch per residue class."""

    d: int
    branches: tuple[BranchRule, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if self.d < 2:
            raise MappingError(f"modulus must be >= 2, got {self.d}")
        seen = {b.residue for b in self.branches}
        if seen != set(range(self.d)):
            raise MappingError(
                f"need exactly one branch per residue 0..{self.d - 1}, got residues {sorted(seen)}"
            )
        if len(self.branches) != self.d:
            raise MappingError("duplicate branch residues")
        for b in self.branches:
            if b.multiplier == 0:
                raise MappingError(f"branch {b.residue}: multiplier must be nonzero")
            if (b.offset - b.residue * b.multiplier) % self.d != 0:
                # without this congruence the branch is not integer-valued
                raise MappingError(
                    f"branch {b.residue}: offset {b.offset} != residue*multiplier (mod {self.d}); "
                    "branches follow the (multiplier*x - offset)/d convention; negate the offset "
                    "if the (m*x + r)/d convention was intended"
                )
        # keep branches sorted by residue so equality and display are canonical
        object.__setattr__(self, "branches", tuple(sorted(self.branches, key=lambda b: b.residue)))

    def branch_for(self, n: int) -> BranchRule:
        return self.branches[n % self.d]

    @property
    def multipliers(self) -> tuple[int, ...]:
        return tuple(b.multiplier for b in self.branches)


@dataclass(frozen=True)
class SymbolSequence:
    """Length-k branch history w_k; alphabet {-1,0,1} for d=3, plain residues otherwise."""

    d: int
    entries: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def k2(self) -> int:
        """Number of divisible steps (residue 0)."""
        return sum(1 for t in self.entries if t == 0)

    @property
    def k1(self) -> int:
        """Number of non-divisible steps."""
        return self.k - self.k2


@dataclass(frozen=True)
class Trajectory:
    """k+1 consecutive values n, T(n), ..., T^(k)(n) with their symbol sequence."""

    start: int
    values: tuple[int, ...]
    symbols: SymbolSequence

    @property
    def k(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class AffineForm:
    """Exact form T^(k)(n) = lam*n + rho with per-multiplier branch counts."""

    lam: Fraction
    rho: Fraction
    k: int
    d: int
    multiplier_counts: tuple[tuple[int, int], ...] = field(default=())

    def evaluate(self, n: int) -> Fraction:
        return self.lam * n + self.rho

    @property
    def k1(self) -> int:
        """Steps through expanding branches (|m| > d)."""
        return sum(c for m, c in self.multiplier_counts if abs(m) > self.d)

    @property
    def k2(self) -> int:
        """Steps through contracting branches (|m| < d)."""
        return sum(c for m, c in self.multiplier_counts if abs(m) < self.d)


def symbol_for_residue(d: int, residue: int) -> int:
    """Encode a residue; for d=3 the t-alphabet 0->0, 1->-1, 2->+1."""
    if d == 3:
        return (0, -1, 1)[residue]
    return residue


def residue_for_symbol(d: int, symbol: int) -> int:
    if d == 3:
        return {0: 0, -1: 1, 1: 2}[symbol]
    if not 0 <= symbol < d:
        raise MappingError(f"symbol {symbol} out of range for modulus {d}")
    return symbol


def apply_map(spec: MappingSpec, n: int) -> int:
    """One step of the mapping."""
    b = spec.branches[n % spec.d]
    num = b.multiplier * n - b.offset
    q, rem = divmod(num, spec.d)
    if rem:  # cannot happen for a validated spec
        raise MappingError(f"branch {b.residue} not integer-valued at {n}")
    return q


def iterate(spec: MappingSpec, n: int, k: int) -> Trajectory:
    """Trajectory n, T(n), ..., T^(k)(n)."""
    if k < 0:
        raise MappingError(f"step count must be >= 0, got {k}")
    values = [n]
    symbols = []
    x = n
    for _ in range(k):
        symbols.append(symbol_for_residue(spec.d, x % spec.d))
        x = apply_map(spec, x)
        values.append(x)
    return Trajectory(start=n, values=tuple(values), symbols=SymbolSequence(spec.d, tuple(symbols)))


def symbol_sequence(spec: MappingSpec, n: int, k: int) -> SymbolSequence:
    """The length-k symbol sequence w_k(n)."""
    return iterate(spec, n, k).symbols


DEFAULT_AFFINE_LIMIT = 64


def affine_form(spec: MappingSpec, n: int, k: int, max_k: int = DEFAULT_AFFINE_LIMIT) -> AffineForm:
    """Compose k steps starting at n into the exact form lam*n + rho."""
    if k > max_k:
        raise MappingError(f"affine composition limited to k <= {max_k} (asked for {k})")
    lam = Fraction(1)
    rho = Fraction(0)
    counts: Counter[int] = Counter()
    x = n
    for _ in range(k):
        b = spec.branches[x % spec.d]
        lam = lam * Fraction(b.multiplier, spec.d)
        rho = (b.multiplier * rho - b.offset) / Fraction(spec.d)
        counts[b.multiplier] += 1
        x = apply_map(spec, x)
    return AffineForm(lam=lam, rho=rho, k=k, d=spec.d,
                      multiplier_counts=tuple(sorted(counts.items())))


def is_permutation(spec: MappingSpec, modulus_limit: int = 10**6) -> bool | None:
    """Whether the mapping is a bijection on Z; None if the check modulus exceeds the limit.

    Branch i maps its residue class onto the progression a_i + m_i*Z; the map
    is a bijection exactly when these progressions tile Z, checked modulo
    lcm(|m_i|).
    """
    mod = lcm(*(abs(b.multiplier) for b in spec.branches))
    if mod > modulus_limit:
        return None
    hits = bytearray(mod)
    for b in spec.branches:
        a = (b.multiplier * b.residue - b.offset) // spec.d % mod
        step = abs(b.multiplier)
        for r in range(a % step, mod, step):
            if hits[r]:
                return False
            hits[r] = 1
    return all(hits)


# --- presets -------------------------------------------------------------

ORIGINAL_COLLATZ = MappingSpec(
    d=3,
    branches=(
        BranchRule(0, 2, 0),
        BranchRule(1, 4, 1),
        BranchRule(2, 4, -1),
    ),
    name="collatz",
)

THREE_X_PLUS_ONE = MappingSpec(
    d=2,
    branches=(
        BranchRule(0, 1, 0),
        BranchRule(1, 3, -1),
    ),
    name="3x1",
)


def carnielli_t(d: int) -> MappingSpec:
    """The d-branch generalization ((d+1)x + (d-i))/d for x = i != 0 (mod d)."""
    if d < 2:
        raise MappingError(f"modulus must be >= 2, got {d}")
    branches = [BranchRule(0, 1, 0)]
    for i in range(1, d):
        branches.append(BranchRule(i, d + 1, i - d))
    return MappingSpec(d=d, branches=tuple(branches), name=f"carnielli-t-{d}")


def carnielli_l(d: int) -> MappingSpec:
    """The signed-representative variant ((d+1)x - i)/d for x = i, -d/2 < i <= d/2."""
    if d < 2:
        raise MappingError(f"modulus must be >= 2, got {d}")
    branches = [BranchRule(0, 1, 0)]
    for res in range(1, d):
        i = res if res <= d // 2 else res - d
        branches.append(BranchRule(res, d + 1, i))
    return MappingSpec(d=d, branches=tuple(branches), name=f"carnielli-l-{d}")


PRESETS: Mapping[str, MappingSpec] = {
    "collatz": ORIGINAL_COLLATZ,
    "3x1": THREE_X_PLUS_ONE,
}


def mapping_to_dict(spec: MappingSpec) -> dict:
    out = {
        "d": spec.d,
        "branches": [
            {"residue": b.residue, "multiplier": b.multiplier, "offset": b.offset}
            for b in spec.branches
        ],
    }
    if spec.name:
        out["name"] = spec.name
    return out


def mapping_from_dict(data: Mapping) -> MappingSpec:
    """Build a spec from {"d": ..., "branches": [{residue, multiplier, offset}, ...]}."""
    try:
        d = int(data["d"])
        branches = tuple(
            BranchRule(int(b["residue"]), int(b["multiplier"]), int(b["offset"]))
            for b in data["branches"]
        )
    except (KeyError, TypeError) as exc:
        raise MappingError(f"malformed mapping definition: {exc}") from exc
    return MappingSpec(d=d, branches=branches, name=str(data.get("name", "")))


def mapping_from_json(text: str) -> MappingSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MappingError(f"mapping file is not valid JSON: {exc}") from exc
    return mapping_from_dict(data)
