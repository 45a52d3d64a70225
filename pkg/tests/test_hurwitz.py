import itertools
from fractions import Fraction
from math import factorial

import pytest

from hurwitz_lab.core import aut_order
from hurwitz_lab.errors import BudgetExceeded, NegativeRamification
from hurwitz_lab.hurwitz import (
    TABLE_BUDGET,
    cycle_factorization_count,
    hurwitz_closed_genus0,
    hurwitz_degeneration,
    hurwitz_monodromy,
    lemma_factorization_count,
    marked_hurwitz,
)


class TestMonodromy:
    def test_reference_values(self):
        assert hurwitz_monodromy(0, (3,)) == 1
        assert hurwitz_monodromy(1, (2, 1)) == 40
        assert hurwitz_monodromy(2, (1,)) == 0

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            hurwitz_monodromy(9, (9, 9))
        with pytest.raises(BudgetExceeded):
            hurwitz_monodromy(2, (1, 1, 1, 1))  # r=10 over the default cap
        assert hurwitz_monodromy(2, (1, 1, 1, 1), budget=TABLE_BUDGET) == 206640

    def test_negative_ramification(self):
        with pytest.raises(NegativeRamification):
            hurwitz_monodromy(0, ())

    def test_budget_env_override(self, monkeypatch):
        from hurwitz_lab.hurwitz import default_budget

        monkeypatch.setenv("HURWITZ_LAB_BUDGET", "100")
        assert default_budget().max_evals == 100
        with pytest.raises(BudgetExceeded):
            hurwitz_monodromy(1, (2, 1))  # 3^5 evaluations over the cap
        monkeypatch.setenv("HURWITZ_LAB_BUDGET", "lots")
        with pytest.raises(ValueError):
            default_budget()

    def test_tuple_count_integrality(self):
        for g, mu in [(0, (2, 1)), (1, (3,)), (1, (1, 1)), (0, (4,))]:
            h = hurwitz_monodromy(g, mu)
            assert (h * factorial(sum(mu))).denominator == 1

    def test_conjugation_invariance(self):
        # fixed-product transitive count times class size equals the
        # class-summed transitive count
        from hurwitz_lab._kernels import count_tuples_class, count_tuples_fixed

        cases = [(3, 4, (3,), (1, 2, 0)), (3, 3, (2, 1), (1, 0, 2)), (4, 4, (2, 2), (1, 0, 3, 2))]
        for d, r, mu, perm in cases:
            cls = count_tuples_class(d, r, mu, True)
            fixed = count_tuples_fixed(d, r, perm, True)
            centralizer = aut_order(mu)
            for m in mu:
                centralizer *= m
            class_size = factorial(d) // centralizer
            assert fixed * class_size == cls


class TestDegeneration:
    def test_reference_values(self):
        assert marked_hurwitz(0, (1,)) == 1
        assert hurwitz_degeneration(0, (2,)) == Fraction(1, 2)
        assert hurwitz_degeneration(2, (2, 2)) == 17472

    def test_marked_unmarked(self):
        for g, mu in [(0, (2, 1, 1)), (1, (2, 2)), (2, (1, 1)), (0, (1, 1, 1, 1))]:
            assert marked_hurwitz(g, mu) == aut_order(mu) * hurwitz_degeneration(g, mu)

    def test_cross_method_small(self):
        for g in range(3):
            for d in range(1, 4):
                for mu in _partitions(d):
                    assert hurwitz_degeneration(g, mu) == hurwitz_monodromy(g, mu, budget=TABLE_BUDGET)

    def test_one_part_tree_link(self):
        for n in range(1, 9):
            assert hurwitz_degeneration(0, (n,)) == Fraction(n) ** (n - 3)


class TestClosedForms:
    def test_examples(self):
        assert hurwitz_closed_genus0("one-part", 4) == 4
        assert hurwitz_closed_genus0("trivial-profile", 3) == 4
        assert hurwitz_closed_genus0("one-part", 1) == 1

    def test_against_degeneration(self):
        for n in range(1, 6):
            assert hurwitz_closed_genus0("one-part", n) == hurwitz_degeneration(0, (n,))
            assert hurwitz_closed_genus0("trivial-profile", n) == hurwitz_degeneration(0, (1,) * n)


def _partitions(d, mx=None):
    if d == 0:
        yield ()
        return
    mx = d if mx is None else mx
    for first in range(min(d, mx), 0, -1):
        for rest in _partitions(d - first, first):
            yield (first,) + rest


def brute_force_factorizations(mu, k):
    """Oracle: literally multiply out all k-tuples of transpositions."""
    d = sum(mu)
    target = []
    base = 0
    for part in mu:
        target.extend([base + (i + 1) % part for i in range(part)])
        base += part
    target = tuple(target)
    trans = list(itertools.combinations(range(d), 2))
    count = 0
    for tup in itertools.product(trans, repeat=k):
        p = list(range(d))
        for a, b in tup:
            p[a], p[b] = p[b], p[a]
        if tuple(p) == target:
            count += 1
    return count


class TestCycleFactorizations:
    def test_reference_values(self):
        assert cycle_factorization_count((3,), 2) == 3
        assert cycle_factorization_count((4,), 3) == 16
        # frozen from the brute-force oracle over the 3 transpositions of S_3
        assert brute_force_factorizations((2, 1), 1) == 1
        assert cycle_factorization_count((2, 1), 1) == 1

    def test_against_oracle(self):
        for mu, k in [((3,), 2), ((2, 2), 2), ((2, 1), 1), ((3, 1), 2), ((2, 2), 4)]:
            assert cycle_factorization_count(mu, k) == brute_force_factorizations(mu, k)

    def test_lemma_formula(self):
        # minimal k = sum(m_i - 1) matches k! prod m^(m-1)/m!
        for d in range(1, 6):
            for mu in _partitions(d):
                k = sum(m - 1 for m in mu)
                assert cycle_factorization_count(mu, k) == lemma_factorization_count(mu)

    def test_n_cycle_count(self):
        for n in range(1, 6):
            assert cycle_factorization_count((n,), n - 1) == n ** (n - 2)
