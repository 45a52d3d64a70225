"""Backend equivalence: the numba and numpy kernels must agree exactly."""

import itertools

import numpy as np
import pytest

from hurwitz_lab._kernels import (
    count_tuples_class,
    count_tuples_fixed,
    decode_pruefer_batch,
    tree_stats_batch,
    trivalent_matchings,
)

BACKENDS = ("numba", "numpy")


def naive_pruefer_decode(code, n):
    """Textbook decode: attach the smallest available leaf at each step."""
    code = list(code)
    degree = [1] * n
    for v in code:
        degree[v] += 1
    edges = []
    for i, v in enumerate(code):
        leaf = min(u for u in range(n) if degree[u] == 1 and u not in code[i:])
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    rest = [x for x in range(n) if degree[x] == 1]
    edges.append((rest[0], rest[1]))
    return edges


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_decode_matches_naive_exhaustively(n):
    codes = np.array(list(itertools.product(range(n), repeat=n - 2)), dtype=np.int64)
    for backend in BACKENDS:
        out = decode_pruefer_batch(codes, backend=backend)
        for row, code in zip(out, codes):
            expect = naive_pruefer_decode(list(code), n)
            got = [(int(u), int(v)) for u, v in row]
            assert got == expect


def test_decode_backends_agree_large():
    rng = np.random.default_rng(3)
    codes = rng.integers(0, 40, size=(50, 38))
    a = decode_pruefer_batch(codes, backend="numba")
    b = decode_pruefer_batch(codes, backend="numpy")
    assert np.array_equal(a, b)


@pytest.mark.parametrize(
    "d,r,target,transitive",
    [
        (2, 1, (2,), True),
        (3, 2, (3,), True),
        (3, 4, (3,), True),
        (4, 4, (2, 1, 1), True),
        (4, 6, (4,), True),
        (4, 3, (1, 1, 1, 1), False),
        (5, 4, (3, 2), True),
    ],
)
def test_class_counts_agree(d, r, target, transitive):
    counts = {b: count_tuples_class(d, r, target, transitive, backend=b) for b in BACKENDS}
    assert counts["numba"] == counts["numpy"]


@pytest.mark.parametrize(
    "d,r,target",
    [
        (3, 2, (1, 2, 0)),
        (4, 3, (1, 2, 3, 0)),
        (4, 5, (1, 0, 3, 2)),
        (5, 4, (1, 2, 0, 4, 3)),
    ],
)
def test_fixed_counts_agree(d, r, target):
    counts = {b: count_tuples_fixed(d, r, target, False, backend=b) for b in BACKENDS}
    assert counts["numba"] == counts["numpy"]


def test_tree_stats_backends_identical():
    rng = np.random.default_rng(11)
    for n in (2, 3, 7, 24, 101):
        size = 64
        codes = rng.integers(0, n, size=(size, n - 2))
        roots = rng.integers(0, n, size=size)
        tops = (roots + 1 + rng.integers(0, n - 1, size=size)) % n
        labels = rng.permuted(np.tile(np.arange(1, n), (size, 1)), axis=1)
        a = tree_stats_batch(codes, roots, tops, labels, backend="numba")
        b = tree_stats_batch(codes, roots, tops, labels, backend="numpy")
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


@pytest.mark.parametrize("v,faces,genus", [(2, 3, 0), (2, 1, 1), (4, 4, 0), (4, 2, 1)])
def test_matchings_agree(v, faces, genus):
    a = trivalent_matchings(v, faces, genus, backend="numba")
    b = trivalent_matchings(v, faces, genus, backend="numpy")
    sa = {tuple(row) for row in a.tolist()}
    sb = {tuple(row) for row in b.tolist()}
    assert sa == sb and len(a) == len(sa)
