"""Hurwitz numbers by monodromy enumeration, by the degeneration recursion,
and by genus-0 closed forms."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from . import _kernels
from .core import (
    Partition,
    aut_order,
    as_partition,
    ordered_subpartition_pairs,
    partition_add,
    partition_moves,
    partition_remove,
    ram_count,
)
from .errors import BudgetExceeded

_BUDGET_ENV = "HURWITZ_LAB_BUDGET"


@dataclass(frozen=True)
class Budget:
    """Caps for the tuple enumerations."""

    max_degree: int = 6
    max_ram: int = 8
    max_evals: int = 15**8

    def check(self, d: int, r: int):
        if d > self.max_degree:
            raise BudgetExceeded(f"degree {d} exceeds cap {self.max_degree}")
        if r > self.max_ram:
            raise BudgetExceeded(f"ramification count {r} exceeds cap {self.max_ram}")
        ntrans = d * (d - 1) // 2
        evals = ntrans**r if ntrans else 1
        if evals > self.max_evals:
            raise BudgetExceeded(f"search space {ntrans}^{r} exceeds cap {self.max_evals}")


def default_budget() -> Budget:
    env = os.environ.get(_BUDGET_ENV)
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"{_BUDGET_ENV} must be an integer, got {env!r}") from None
        if cap < 1:
            raise ValueError(f"{_BUDGET_ENV} must be positive")
        return Budget(max_evals=cap)
    return Budget()


# generous caps used by the table/acceptance runners; the genus-2 degree-4
# reference rows need r up to 10
TABLE_BUDGET = Budget(max_degree=6, max_ram=12, max_evals=15**8)


@dataclass(frozen=True)
class HurwitzValue:
    genus: int
    profile: Partition
    value: Fraction
    method: str


def hurwitz_monodromy(g: int, mu, budget: Budget | None = None, backend: str | None = None) -> Fraction:
    """H_{g,mu} as 1/d! times the number of r-tuples of transpositions in S_d
    with transitive support graph and product of cycle type mu."""
    p = as_partition(mu)
    d = p.size
    r = ram_count(g, p)
    (budget or default_budget()).check(d, r)
    count = _kernels.count_tuples_class(d, r, p.parts, transitive=True, backend=backend)
    return Fraction(count, factorial(d))


def cycle_factorization_count(mu, k: int, budget: Budget | None = None, backend: str | None = None) -> int:
    """Number of k-tuples of transpositions whose ordered product equals a
    fixed permutation of cycle type mu (no transitivity condition)."""
    p = as_partition(mu)
    d = p.size
    (budget or default_budget()).check(d, k)
    target = []
    base = 0
    for part in p.parts:
        target.extend([base + (i + 1) % part for i in range(part)])
        base += part
    return _kernels.count_tuples_fixed(d, k, tuple(target), transitive=False, backend=backend)


def lemma_factorization_count(mu) -> int:
    """Closed form k! * prod m_i^{m_i-1}/m_i! for the minimal k = sum(m_i-1)."""
    p = as_partition(mu)
    k = sum(m - 1 for m in p.parts)
    num = factorial(k)
    val = Fraction(num)
    for m in p.parts:
        val *= Fraction(m ** (m - 1), factorial(m))
    assert val.denominator == 1
    return val.numerator


def hurwitz_closed_genus0(variant: str, n: int) -> Fraction:
    """Genus-0 closed forms: one-part profile (n) gives n^(n-3); the trivial
    profile 1^d gives (2d-2)!/d! * d^(d-3)."""
    if n < 1:
        raise ValueError("argument must be >= 1")
    if variant == "one-part":
        return Fraction(n) ** (n - 3)
    if variant == "trivial-profile":
        return Fraction(factorial(2 * n - 2), factorial(n)) * Fraction(n) ** (n - 3)
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# degeneration recursion on marked numbers H*

_MARKED_MEMO: dict[tuple[int, tuple[int, ...]], Fraction] = {(0, (1,)): Fraction(1)}


def marked_hurwitz(g: int, mu) -> Fraction:
    """Marked Hurwitz number H*_{g,mu} = |Aut(mu)| H_{g,mu} by the three-case
    edge-removal recursion; memoized on the canonical (g, mu)."""
    p = as_partition(mu)
    key = (g, p.parts)
    cached = _MARKED_MEMO.get(key)
    if cached is not None:
        return cached
    if g < 0 or not p.parts:
        return Fraction(0)
    r = ram_count(g, p)
    if r == 0:
        # only (0,(1)) has r=0 and that is the memoized base case
        return Fraction(0)
    moves = partition_moves(p)
    total = Fraction(0)

    # I: merge two distinct cells
    for vi, vj, res, npairs in moves.merges:
        total += npairs * Fraction(vi + vj, 2) * marked_hurwitz(g, res)

    # II: non-disconnecting split, genus drops
    if g >= 1:
        for v, a1, a2, res in moves.splits:
            mult = p.parts.count(v)
            w = Fraction(a1 * a2, 2) * (2 if a1 != a2 else 1)
            total += mult * w * marked_hurwitz(g - 1, res)

    # III: disconnecting split, ordered in (a1,a2), (g1,g2) and (mu1,mu2)
    for v in sorted(set(p.parts), reverse=True):
        mult = p.parts.count(v)
        if v < 2:
            continue
        rest = partition_remove(p, v)
        pairs = ordered_subpartition_pairs(rest)
        for a1 in range(1, v):
            a2 = v - a1
            w = mult * Fraction(a1 * a2, 2)
            for g1 in range(0, g + 1):
                g2 = g - g1
                for mu1, mu2, ways in pairs:
                    left = marked_hurwitz(g1, partition_add(mu1, a1))
                    if not left:
                        continue
                    right = marked_hurwitz(g2, partition_add(mu2, a2))
                    if not right:
                        continue
                    eps = comb(r - 1, ram_count(g1, partition_add(mu1, a1)))
                    total += w * ways * eps * left * right

    _MARKED_MEMO[key] = total
    return total


def hurwitz_degeneration(g: int, mu) -> Fraction:
    """H_{g,mu} = H*_{g,mu} / |Aut(mu)| via the degeneration recursion."""
    p = as_partition(mu)
    ram_count(g, p)  # raises NegativeRamification when no covers exist
    return marked_hurwitz(g, p) / aut_order(p)
