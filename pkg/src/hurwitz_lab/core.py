"""Exact arithmetic and partition combinatorics shared by every other module.

Rational values are `fractions.Fraction` throughout (exact, lowest terms,
positive denominator).  Partitions are weakly decreasing tuples of positive
integers; the empty partition is allowed where the degeneration recursion
needs it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator

from .errors import NegativeRamification

Rat = Fraction


def _as_parts(parts: Iterable[int]) -> tuple[int, ...]:
    t = tuple(sorted((int(p) for p in parts), reverse=True))
    if any(p <= 0 for p in t):
        raise ValueError(f"partition parts must be positive, got {t}")
    return t


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive integer parts; empty allowed."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int] = ()):
        object.__setattr__(self, "parts", _as_parts(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def as_partition(mu) -> Partition:
    if isinstance(mu, Partition):
        return mu
    return Partition(mu)


def aut_order(mu) -> int:
    """Order of the symmetry group of the parts: product of multiplicity factorials."""
    parts = as_partition(mu).parts
    out = 1
    for v in set(parts):
        out *= factorial(parts.count(v))
    return out


def ram_count(g: int, mu) -> int:
    """Number of simple finite branch points: 2g-2+|mu|+l(mu)."""
    p = as_partition(mu)
    r = 2 * g - 2 + p.size + p.length
    if r < 0:
        raise NegativeRamification(f"r({g},{p}) = {r} < 0")
    return r


# ---------------------------------------------------------------------------
# partition moves used by the degeneration recursion


@dataclass(frozen=True)
class PartitionMoves:
    """Canonically deduplicated move set of a partition.

    deletions:   (part, result) for each distinct part value
    merges:      (part_i, part_j, result, ordered_pair_count) over distinct
                 position pairs, grouped by value pair
    splits:      (part, a1, a2, result) with a1 >= a2 >= 1, a1+a2 = part,
                 for each distinct part value
    """

    deletions: tuple[tuple[int, Partition], ...]
    merges: tuple[tuple[int, int, Partition, int], ...]
    splits: tuple[tuple[int, int, int, Partition], ...]


def partition_remove(mu: Partition, value: int) -> Partition:
    parts = list(mu.parts)
    parts.remove(value)
    return Partition(parts)


def partition_add(mu: Partition, value: int) -> Partition:
    return Partition(mu.parts + (value,))


def partition_merge(mu: Partition, vi: int, vj: int) -> Partition:
    parts = list(mu.parts)
    parts.remove(vi)
    parts.remove(vj)
    parts.append(vi + vj)
    return Partition(parts)


def partition_split(mu: Partition, value: int, a1: int, a2: int) -> Partition:
    if a1 + a2 != value or a1 <= 0 or a2 <= 0:
        raise ValueError(f"invalid split {value} -> {a1}+{a2}")
    parts = list(mu.parts)
    parts.remove(value)
    parts.extend((a1, a2))
    return Partition(parts)


def partition_moves(mu) -> PartitionMoves:
    """All deletion / merge / split moves of `mu`, deduplicated by value."""
    p = as_partition(mu)
    parts = p.parts
    mult = {v: parts.count(v) for v in set(parts)}

    deletions = tuple((v, partition_remove(p, v)) for v in sorted(mult, reverse=True))

    merges = []
    values = sorted(mult, reverse=True)
    for i, vi in enumerate(values):
        for vj in values[i:]:
            if vi == vj:
                count = mult[vi] * (mult[vi] - 1)  # ordered position pairs
            else:
                count = 2 * mult[vi] * mult[vj]
            if count:
                merges.append((vi, vj, partition_merge(p, vi, vj), count))

    splits = []
    for v in values:
        for a1 in range(v - 1, (v - 1) // 2, -1):
            a2 = v - a1
            splits.append((v, a1, a2, partition_split(p, v, a1, a2)))

    return PartitionMoves(deletions, tuple(merges), tuple(splits))


def ordered_subpartition_pairs(mu: Partition) -> list[tuple[Partition, Partition, int]]:
    """All ordered pairs (mu1, mu2) of sub-multisets with mu1 + mu2 = mu, each
    with the number prod_v C(mult_v, k_v) of ways to realize it when the
    parts carry distinct marks."""
    values = sorted(set(mu.parts), reverse=True)
    mults = [mu.parts.count(v) for v in values]
    out = []

    def rec(idx: int, left: list[int], right: list[int], ways: int):
        if idx == len(values):
            out.append((Partition(left), Partition(right), ways))
            return
        v, m = values[idx], mults[idx]
        for k in range(m + 1):
            rec(idx + 1, left + [v] * k, right + [v] * (m - k), ways * comb(m, k))

    rec(0, [], [], 1)
    return out


def partitions_of(d: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Weakly decreasing tuples of positive integers summing to d."""
    if d == 0:
        yield ()
        return
    top = d if max_part is None else min(d, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_of(d - first, first):
            yield (first,) + rest


def double_factorial_odd(k: int) -> int:
    """(2k-1)!! with the convention (-1)!! = 1."""
    out = 1
    for j in range(1, 2 * k, 2):
        out *= j
    return out


def multinomial(total: int, parts: Iterable[int]) -> int:
    parts = list(parts)
    if sum(parts) != total:
        raise ValueError("multinomial parts must sum to total")
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out
