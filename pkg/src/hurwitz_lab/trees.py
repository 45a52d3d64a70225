"""Labeled random trees: exact counts, the uniform edge-tree sampler, trunk
and root-component and semiperimeter statistics, limit-law test harness, and
the perimeter-measure Laplace estimate.

An edge tree has edges labeled 1..n-1 plus a root and a distinct top vertex.
It embeds canonically in the sphere (rotations follow the labels); the
boundary walk splits at the trunk edges into a root path and a top path
whose angle sums are the two semiperimeters, exact rationals with
denominator n-1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import _kernels
from .errors import InsufficientSamples

_CLOSED_FORMS = {
    "V": lambda n: Fraction(n) ** (n - 2),
    "E": lambda n: Fraction(n) ** (n - 3),
    "V1": lambda n: Fraction(n) ** (n - 1),
    "E1": lambda n: Fraction(n) ** (n - 2),
    "V11": lambda n: (n - 1) * Fraction(n) ** (n - 1),
    "E11": lambda n: (n - 1) * Fraction(n) ** (n - 2),
    "V2": lambda n: Fraction(n) ** n,
    "E2": lambda n: Fraction(n) ** (n - 1),
}

TREE_CLASSES = tuple(_CLOSED_FORMS)


def count_trees(cls: str, n: int) -> Fraction:
    """Closed-form count of the labeled tree class; the edge-labeled classes
    are automorphism-weighted, which is where E(2) = 1/2 comes from."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if cls not in _CLOSED_FORMS:
        raise ValueError(f"unknown tree class {cls!r} (no closed form); one of {TREE_CLASSES}")
    if n == 1 and cls in ("V11", "E11"):
        return Fraction(0)
    return _CLOSED_FORMS[cls](n)


def forest_count(n: int, k: int) -> int:
    """Rooted forests on n labeled vertices with k components."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    val = k * math.comb(n, k) * Fraction(n) ** (n - k - 1)
    assert val.denominator == 1
    return val.numerator


# ---------------------------------------------------------------------------
# edge trees


@dataclass(frozen=True)
class EdgeTree:
    """Tree on vertices 0..n-1; edges[i] carries label i+1; root != top."""

    n: int
    edges: tuple[tuple[int, int], ...]
    root: int
    top: int

    def __post_init__(self):
        n = self.n
        if len(self.edges) != n - 1:
            raise ValueError("a tree on n vertices has n-1 edges")
        if not (0 <= self.root < n and 0 <= self.top < n) or self.root == self.top:
            raise ValueError("root and top must be distinct vertices")
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError("edges contain a cycle")
            parent[rv] = ru
        if len({find(x) for x in range(n)}) != 1:
            raise ValueError("tree is not connected")


@dataclass(frozen=True)
class SemiperimeterPair:
    p_root: Fraction
    p_top: Fraction

    def __post_init__(self):
        if self.p_root < 0 or self.p_top < 0:
            raise ValueError("semiperimeters must be nonnegative")


def _sorted_incidence(t: EdgeTree):
    inc: list[list[tuple[int, int]]] = [[] for _ in range(t.n)]
    for i, (u, v) in enumerate(t.edges):
        inc[u].append((i + 1, v))
        inc[v].append((i + 1, u))
    for lst in inc:
        lst.sort()
    return inc


def _boundary_walk(t: EdgeTree):
    """The closed boundary walk (2(n-1) darts) of the canonical planar
    embedding, started from the root along its smallest label."""
    inc = _sorted_incidence(t)
    slot_of = {}
    for v in range(t.n):
        for i, (lab, w) in enumerate(inc[v]):
            slot_of[(v, lab)] = i
    walk = []  # (tail, head, label)
    v = t.root
    lab, w = inc[v][0]
    for _ in range(2 * (t.n - 1)):
        walk.append((v, w, lab))
        # continue from w along the label-cyclic successor of the arrival edge
        i = slot_of[(w, lab)]
        lab, nxt = inc[w][(i + 1) % len(inc[w])]
        v, w = w, nxt
    return walk


def _tree_measurements(t: EdgeTree, label_of: dict[int, int] | None = None, modulus: int | None = None):
    """Everything the statistics need, as exact numbers.

    label_of optionally relabels edge labels through a monotone injection;
    modulus is the angle modulus (defaults to n-1).
    """
    n = t.n
    walk = _boundary_walk(t)
    m = len(walk)
    first_head: dict[int, int] = {}
    parent = {}
    parent_edge = {}
    for step, (a, b, lab) in enumerate(walk):
        if b not in first_head and b != t.root:
            first_head[b] = step
            parent[b] = a
            parent_edge[b] = lab
    # psi: order of first appearance along the walk, root first
    psi = {t.root: 1}
    for step, (a, b, lab) in enumerate(walk):
        if b not in psi:
            psi[b] = len(psi) + 1

    # trunk: path from root to top through parents
    path = [t.top]
    while path[-1] != t.root:
        path.append(parent[path[-1]])
    trunk = len(path)
    e_t = parent_edge[t.top]
    c1 = path[-2]
    e_r = parent_edge[c1]

    # root component: remove e_r, count the root side
    pos = [i for i, (_, _, lab) in enumerate(walk) if lab == e_r]
    q1, q2 = pos
    rootcomp = n - (q2 - q1 + 1) // 2

    mod = modulus if modulus is not None else n - 1
    lab_map = label_of if label_of is not None else {}

    def eff(lab):
        return lab_map.get(lab, lab)

    def angle_units(j):
        here = eff(walk[j][2])
        nxt = eff(walk[(j + 1) % m][2])
        return (nxt - here) % mod or mod

    p_end = next(i for i, (_, _, lab) in enumerate(walk) if lab == e_t)
    pr_units = 0
    j = (q2 + 1) % m
    while j != p_end:
        pr_units += angle_units(j)
        j = (j + 1) % m
    total_units = sum(angle_units(j) for j in range(m))
    pt_units = total_units - pr_units - angle_units(q2) - angle_units(p_end)
    return {
        "trunk": trunk,
        "rootcomp": rootcomp,
        "p_root": Fraction(pr_units, mod),
        "p_top": Fraction(pt_units, mod),
        "psi_top": psi[t.top],
        "total_perimeter": Fraction(total_units, mod),
    }


def trunk_length(t: EdgeTree) -> int:
    """Number of vertices on the root-top path."""
    return _tree_measurements(t)["trunk"]


def root_component_size(t: EdgeTree) -> int:
    """Vertices on the root side of the trunk edge at the root."""
    return _tree_measurements(t)["rootcomp"]


def semiperimeters(t: EdgeTree) -> SemiperimeterPair:
    m = _tree_measurements(t)
    return SemiperimeterPair(m["p_root"], m["p_top"])


def psi_of_top(t: EdgeTree) -> int:
    return _tree_measurements(t)["psi_top"]


def semiperimeters_relabeled(t: EdgeTree, injection: dict[int, int], modulus: int) -> SemiperimeterPair:
    """Semiperimeters after a monotone injective relabeling into 1..modulus."""
    labs = sorted(injection)
    if labs != list(range(1, t.n)):
        raise ValueError("injection must be defined on 1..n-1")
    vals = [injection[k] for k in labs]
    if any(b <= a for a, b in zip(vals, vals[1:])) or vals[-1] > modulus or vals[0] < 1:
        raise ValueError("relabeling must be monotone injective into 1..modulus")
    m = _tree_measurements(t, label_of=injection, modulus=modulus)
    return SemiperimeterPair(m["p_root"], m["p_top"])


def canonical_key(t: EdgeTree) -> tuple:
    """Complete invariant of the edge tree up to vertex renaming."""
    inc = _sorted_incidence(t)
    order = {t.root: 0}
    queue = [t.root]
    code = []
    while queue:
        v = queue.pop(0)
        for lab, w in inc[v]:
            if w not in order:
                order[w] = len(order)
                queue.append(w)
                code.append((order[v], lab))
    return (t.n, tuple(code), order[t.top])


# ---------------------------------------------------------------------------
# sampling


def _draw_batch(n: int, size: int, rng: np.random.Generator):
    codes = rng.integers(0, n, size=(size, max(n - 2, 0)), dtype=np.int64)
    roots = rng.integers(0, n, size=size, dtype=np.int64)
    tops = (roots + 1 + rng.integers(0, n - 1, size=size, dtype=np.int64)) % n
    labels = rng.permuted(np.tile(np.arange(1, n, dtype=np.int64), (size, 1)), axis=1)
    return codes, roots, tops, labels


def sample_edge_tree(n: int, seed: int) -> EdgeTree:
    """Exactly uniform over the edge trees on n vertices: uniform code word
    (a bijection with vertex-labeled trees), uniform ordered (root, top),
    uniform edge labeling; vertex names are then irrelevant."""
    if n < 2:
        raise ValueError("edge trees need n >= 2")
    rng = np.random.default_rng(seed)
    codes, roots, tops, labels = _draw_batch(n, 1, rng)
    edges_arr = _kernels.decode_pruefer_batch(codes)[0]
    order = np.empty(n - 1, dtype=np.int64)
    order[labels[0] - 1] = np.arange(n - 1)
    edges = tuple((int(edges_arr[e, 0]), int(edges_arr[e, 1])) for e in order)
    return EdgeTree(n, edges, int(roots[0]), int(tops[0]))


def sample_stats(n: int, samples: int, seed: int, backend: str | None = None, chunk: int | None = None):
    """Batched per-sample statistics: dict of int64 arrays with keys trunk,
    rootcomp, pr_num, pt_num, psi_top (semiperimeter denominators are n-1)."""
    rng = np.random.default_rng(seed)
    if chunk is None:
        chunk = max(1, min(samples, 4_000_000 // max(n, 1)))
    outs = {k: [] for k in ("trunk", "rootcomp", "pr_num", "pt_num", "psi_top")}
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        codes, roots, tops, labels = _draw_batch(n, b, rng)
        trunk, rootcomp, prn, ptn, psiv = _kernels.tree_stats_batch(codes, roots, tops, labels, backend=backend)
        for key, arr in zip(outs, (trunk, rootcomp, prn, ptn, psiv)):
            outs[key].append(arr)
        done += b
    return {k: np.concatenate(v) for k, v in outs.items()}


# ---------------------------------------------------------------------------
# limit-law statistics


def borel_pmf(k: int) -> float:
    # log form: k^(k-1) e^(-k) / k! overflows floats beyond k ~ 170
    return math.exp((k - 1) * math.log(k) - k - math.lgamma(k + 1)) if k > 1 else math.exp(-1)


def chi2_quantile(dof: int, prob: float) -> float:
    """Inverse chi-square CDF by bisection on the regularized gamma."""

    def cdf(x):
        return float(mpmath.gammainc(dof / 2, 0, x / 2, regularized=True))

    lo, hi = 0.0, 8.0 * dof + 200.0
    while cdf(hi) < prob:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if cdf(mid) < prob:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def ks_distance(sorted_values: np.ndarray, cdf_values: np.ndarray) -> float:
    """Two-sided KS distance of an empirical sample against a CDF,
    cdf_values = F(sorted_values)."""
    nsamp = len(sorted_values)
    i = np.arange(1, nsamp + 1)
    return float(max(np.max(cdf_values - (i - 1) / nsamp), np.max(i / nsamp - cdf_values)))


@dataclass(frozen=True)
class StatReport:
    statistic: str
    n: int
    samples: int
    seed: int
    kind: str  # "ks" or "chi2"
    value: float
    threshold: float
    verdict: bool

    def to_json_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "kind": self.kind,
            "value": self.value,
            "threshold": self.threshold,
            "verdict": "pass" if self.verdict else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


STATISTICS = ("trunk", "rootcomp", "semiper", "valence")

_KS_SAFETY = 3.0
_CHI2_TAIL = 1e-4
_BOREL_CUT = 30
_POISSON_CUT = 12


def _chi2_stat(counts: np.ndarray, probs: np.ndarray, samples: int) -> float:
    expected = probs * samples
    return float(np.sum((counts - expected) ** 2 / expected))


def stat_test(statistic: str, n: int, samples: int, seed: int, backend: str | None = None,
              precomputed=None) -> StatReport:
    """Goodness-of-fit of one tree statistic against its limit law."""
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    if n < 100 or samples < 10_000:
        raise InsufficientSamples("need n >= 100 and samples >= 10^4")

    if statistic == "valence":
        rng = np.random.default_rng(seed)
        chunk = max(1, 4_000_000 // max(n, 1))
        parts = []
        done = 0
        while done < samples:
            b = min(chunk, samples - done)
            codes = rng.integers(0, n, size=(b, n - 2), dtype=np.int64)
            parts.append(np.sum(codes == 0, axis=1))  # excess valence of vertex 0
            done += b
        excess = np.concatenate(parts)
        cut = _POISSON_CUT
        probs = np.array([math.exp(-1) / math.factorial(k) for k in range(cut)])
        probs = np.append(probs, 1.0 - probs.sum())
        counts = np.bincount(np.minimum(excess, cut), minlength=cut + 1).astype(float)
        value = _chi2_stat(counts, probs, samples)
        threshold = chi2_quantile(len(probs) - 1, 1 - _CHI2_TAIL)
        return StatReport(statistic, n, samples, seed, "chi2", value, threshold, value < threshold)

    stats = precomputed if precomputed is not None else sample_stats(n, samples, seed, backend=backend)
    if statistic == "trunk":
        x = np.sort(stats["trunk"] / math.sqrt(n))
        cdf = 1.0 - np.exp(-(x**2) / 2.0)
        value = ks_distance(x, cdf)
        threshold = _KS_SAFETY * 1.63 / math.sqrt(samples)
        return StatReport(statistic, n, samples, seed, "ks", value, threshold, value < threshold)
    if statistic == "semiper":
        u = np.sort(stats["pr_num"] / (n - 1) / n)
        value = ks_distance(u, np.clip(u, 0.0, 1.0))
        threshold = _KS_SAFETY * 1.63 / math.sqrt(samples)
        return StatReport(statistic, n, samples, seed, "ks", value, threshold, value < threshold)
    # rootcomp: chi-square against the Borel mass, lumped tail
    cut = _BOREL_CUT
    probs = np.array([borel_pmf(k) for k in range(1, cut + 1)])
    probs = np.append(probs, 1.0 - probs.sum())
    rc = stats["rootcomp"]
    counts = np.bincount(np.minimum(rc, cut + 1), minlength=cut + 2)[1:].astype(float)
    value = _chi2_stat(counts, probs, samples)
    threshold = chi2_quantile(len(probs) - 1, 1 - _CHI2_TAIL)
    return StatReport(statistic, n, samples, seed, "chi2", value, threshold, value < threshold)


# ---------------------------------------------------------------------------
# perimeter measure


def perimeter_laplace_closed_form(y1, y2) -> mpmath.mpf:
    return mpmath.sqrt(2) / (mpmath.sqrt(mpmath.mpf(y1)) + mpmath.sqrt(mpmath.mpf(y2)))


def perimeter_laplace(y1, y2, big_n: int, samples_per_n: int, seed: int,
                      backend: str | None = None) -> mpmath.mpf:
    """Monte Carlo estimate of the Laplace transform of the perimeter
    measure: (1/sqrt(N)) sum_n w_n E[exp(-(y1 P_R + y2 P_T)/N)] with
    w_n = |E11(n)|/(e^n (n-1)!), truncated at n = 8N."""
    y1 = float(y1)
    y2 = float(y2)
    if y1 <= 0 or y2 <= 0:
        raise ValueError("y coordinates must be positive")
    if big_n < 1_000 or samples_per_n < 1:
        raise InsufficientSamples("need N >= 10^3 and at least one sample per size")
    rng = np.random.default_rng(seed)
    total = 0.0
    for n in range(2, 8 * big_n + 1):
        ln_w = math.log(n - 1) + (n - 2) * math.log(n) - n - math.lgamma(n)
        codes, roots, tops, labels = _draw_batch(n, samples_per_n, rng)
        _, _, prn, ptn, _ = _kernels.tree_stats_batch(codes, roots, tops, labels, backend=backend)
        pr = prn / (n - 1)
        pt = ptn / (n - 1)
        mean = float(np.mean(np.exp(-(y1 * pr + y2 * pt) / big_n)))
        total += math.exp(ln_w) * mean
    return mpmath.mpf(total) / mpmath.sqrt(big_n)
