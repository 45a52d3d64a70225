"""Intersection numbers on the moduli of curves and their Hurwitz links.

The psi-correlator engine combines the KdV equation for the generating
function with the string and dilaton equations.  A correlator with some
index 0 or 1 is reduced symbolically; a correlator whose indices are all
at least 2 is solved for out of the KdV identity differentiated by the
remaining insertions.  Everything is exact rational arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial, isqrt
from typing import Callable, Iterable, Iterator

import mpmath

from .core import Partition, as_partition, aut_order, double_factorial_odd, partitions_of, ram_count
from .errors import MissingHodgeEntry, PrecisionLoss, RankDeficient, UnstableRange

# ---------------------------------------------------------------------------
# pure psi correlators


def _canon(taus: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(taus, reverse=True))


def _genus_for(ms: tuple[int, ...]) -> int | None:
    """Genus forced by the dimension condition, or None if no genus fits."""
    n = len(ms)
    s = sum(ms)
    if n == 0:
        return None
    if (s + 3 - n) % 3:
        return None
    g = (s + 3 - n) // 3
    if g < 0 or 2 * g - 2 + n <= 0:
        return None
    return g


_EXPAND_MEMO: dict[tuple[int, ...], tuple[Fraction, dict]] = {}
_CORR_MEMO: dict[tuple[int, ...], Fraction] = {}


def _expand(ms: tuple[int, ...]) -> tuple[Fraction, dict[tuple[int, ...], Fraction]]:
    """Symbolically strip tau_0 (string) and tau_1 (dilaton) insertions.

    Returns (constant, linear) with the correlator equal to
    constant + sum over all-indices>=2 keys of coeff * <key>.
    """
    ms = _canon(ms)
    cached = _EXPAND_MEMO.get(ms)
    if cached is not None:
        return cached
    g = _genus_for(ms)
    if g is None or any(k < 0 for k in ms):
        out = (Fraction(0), {})
    elif ms == (0, 0, 0):
        out = (Fraction(1), {})
    elif ms == (1,):
        out = (Fraction(1, 24), {})
    elif ms[-1] >= 2:
        out = (Fraction(0), {ms: Fraction(1)})
    elif ms[-1] == 0:
        # string: remove one tau_0, lower each remaining index in turn
        rest = list(ms[:-1])
        const = Fraction(0)
        lin: dict[tuple[int, ...], Fraction] = {}
        for val in sorted(set(rest), reverse=True):
            if val == 0:
                continue  # tau_{-1} drops
            mult = rest.count(val)
            lowered = list(rest)
            lowered.remove(val)
            lowered.append(val - 1)
            c2, l2 = _expand(tuple(lowered))
            const += mult * c2
            for key, cf in l2.items():
                lin[key] = lin.get(key, Fraction(0)) + mult * cf
        out = (const, {k: v for k, v in lin.items() if v})
    else:
        # dilaton: <tau_1 R>_g = (2g-2+|R|) <R>_g
        rest = list(ms)
        rest.remove(1)
        factor = Fraction(2 * g - 2 + len(rest))
        c2, l2 = _expand(tuple(rest))
        out = (factor * c2, {k: factor * v for k, v in l2.items() if factor * v})
    _EXPAND_MEMO[ms] = out
    return out


def _msplits(ms: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Sub-multiset splits (S, complement, count of labeled realizations)."""
    values = sorted(set(ms), reverse=True)
    mults = [ms.count(v) for v in values]
    out = []

    def rec(i, left, right, ways):
        if i == len(values):
            out.append((tuple(left), tuple(right), ways))
            return
        v, m = values[i], mults[i]
        for k in range(m + 1):
            rec(i + 1, left + [v] * k, right + [v] * (m - k), ways * comb(m, k))

    rec(0, [], [], 1)
    return out


def _corr(ms: tuple[int, ...]) -> Fraction:
    ms = _canon(ms)
    cached = _CORR_MEMO.get(ms)
    if cached is not None:
        return cached
    const, lin = _expand(ms)
    total = const
    for key, cf in lin.items():
        total += cf * _solve_min2(key)
    _CORR_MEMO[ms] = total
    return total


def _solve_min2(key: tuple[int, ...]) -> Fraction:
    """Value of a correlator whose indices are all >= 2, out of the KdV
    identity with head index max+2 differentiated by the other insertions."""
    cached = _CORR_MEMO.get(key)
    if cached is not None:
        return cached
    m = key[0]
    rest = key[1:]
    M = m + 2
    wc, wl = _expand(_canon((M, 0, 0) + rest))
    a_lhs = (2 * M + 1) * wl.get(key, Fraction(0))

    rhs_const = Fraction(0)
    rhs_lin: dict[tuple[int, ...], Fraction] = {}
    for s_part, c_part, ways in _msplits(rest):
        if c_part:
            # neither factor can reproduce `key`: evaluate numerically
            v = _corr((M - 1, 0) + s_part) * _corr((0, 0, 0) + c_part)
            v += 2 * _corr((M - 1, 0, 0) + s_part) * _corr((0, 0) + c_part)
            rhs_const += ways * v
        else:
            # S = rest; <tau_0^3> = 1 and <tau_0^2> = 0
            ca, la = _expand(_canon((M - 1, 0) + s_part))
            rhs_const += ways * ca
            for k2, cf in la.items():
                rhs_lin[k2] = rhs_lin.get(k2, Fraction(0)) + ways * cf
    rhs_const += Fraction(1, 4) * _corr((M - 1, 0, 0, 0, 0) + rest)

    denom = a_lhs - rhs_lin.pop(key, Fraction(0))
    if denom != 2 * M:
        # the target appears once on each side, with weights 2M+1 and 1
        raise ArithmeticError(f"degenerate KdV solve for {key}: denominator {denom}")
    total = rhs_const - (2 * M + 1) * wc
    for k2, cf in rhs_lin.items():
        total += cf * _corr(k2)
    for k2, cf in wl.items():
        if k2 != key:
            total -= (2 * M + 1) * cf * _corr(k2)
    value = total / denom
    _CORR_MEMO[key] = value
    return value


def psi_correlator(g: int, taus: Iterable[int]) -> Fraction:
    """<tau_{k_1} ... tau_{k_n}>_g, exactly; zero outside the support."""
    ms = _canon(taus)
    if any(k < 0 for k in ms):
        return Fraction(0)
    if _genus_for(ms) != g:
        return Fraction(0)
    return _corr(ms)


def genus0_closed(taus: Iterable[int]) -> Fraction:
    """Closed form (n-3)! / prod k_i! for genus 0; zero off-dimension."""
    ms = tuple(taus)
    n = len(ms)
    if n < 3 or sum(ms) != n - 3 or any(k < 0 for k in ms):
        return Fraction(0)
    out = Fraction(factorial(n - 3))
    for k in ms:
        out /= factorial(k)
    return out


def compositions(total: int, length: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `length` nonnegative integers summing to `total`."""
    if length == 0:
        if total == 0:
            yield ()
        return
    if length == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, length - 1):
            yield (first,) + rest


def n_point_eval(g: int, xs) -> Fraction:
    """P_g(x_1..x_l) = sum over sum(k)=3g-3+l of <tau_k> prod x_i^{k_i}."""
    xs = list(xs)
    l = len(xs)
    if 2 * g - 2 + l <= 0:
        raise UnstableRange(f"(g,l)=({g},{l}) outside 2g-2+l>0")
    dim = 3 * g - 3 + l
    total = Fraction(0)
    for ks in compositions(dim, l):
        c = psi_correlator(g, ks)
        if not c:
            continue
        term = c
        for x, k in zip(xs, ks):
            term *= Fraction(x) ** k
        total += term
    return total


def kontsevich_series_eval(g: int, s):
    """K_g(s_1..s_n) = sum <tau_k> prod (2k_i-1)!!/s_i^(2k_i+1).

    Exact Fraction for rational s; works elementwise for mpmath floats too.
    """
    s = list(s)
    n = len(s)
    if 2 * g - 2 + n <= 0:
        raise UnstableRange(f"(g,n)=({g},{n}) outside 2g-2+n>0")
    dim = 3 * g - 3 + n
    exact = all(not isinstance(x, (float, mpmath.mpf)) for x in s)
    total = Fraction(0) if exact else mpmath.mpf(0)
    for ks in compositions(dim, n):
        c = psi_correlator(g, ks)
        if not c:
            continue
        term = c if exact else mpmath.mpf(c.numerator) / c.denominator
        for x, k in zip(s, ks):
            if exact:
                term *= Fraction(double_factorial_odd(k)) / Fraction(x) ** (2 * k + 1)
            else:
                term *= double_factorial_odd(k) / mpmath.mpf(x) ** (2 * k + 1)
        total += term
    return total


# ---------------------------------------------------------------------------
# Hodge integrals: table, ELSV evaluation, inversion


@dataclass(frozen=True, order=True)
class Correlator:
    """<tau_{k_1}..tau_{k_n} lambda_k>_g with canonically sorted tau indices."""

    genus: int
    taus: tuple[int, ...]
    lam: int = 0

    def __post_init__(self):
        object.__setattr__(self, "taus", _canon(self.taus))

    def __str__(self):
        taus = " ".join(f"tau_{k}" for k in self.taus)
        lam = f" lambda_{self.lam}" if self.lam else ""
        return f"<{taus}{lam}>_{self.genus}"


class HodgeTable:
    """Exact values keyed by Correlator, with a JSON wire format."""

    def __init__(self, entries: dict[Correlator, Fraction] | None = None):
        self.entries: dict[Correlator, Fraction] = dict(entries or {})

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, HodgeTable) and self.entries == other.entries

    def get(self, corr: Correlator) -> Fraction:
        try:
            return self.entries[corr]
        except KeyError:
            raise MissingHodgeEntry(corr) from None

    def set(self, corr: Correlator, value: Fraction):
        self.entries[corr] = value

    def update(self, other: "HodgeTable"):
        self.entries.update(other.entries)

    def to_json(self) -> str:
        items = sorted(self.entries.items())
        return json.dumps(
            [
                {"g": c.genus, "taus": list(c.taus), "lambda": c.lam, "num": str(v.numerator), "den": str(v.denominator)}
                for c, v in items
            ],
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> "HodgeTable":
        table = cls()
        for row in json.loads(text):
            table.set(
                Correlator(row["g"], tuple(row["taus"]), row["lambda"]),
                Fraction(int(row["num"]), int(row["den"])),
            )
        return table


def elsv_prefactor(g: int, mu: Partition) -> Fraction:
    pref = Fraction(factorial(ram_count(g, mu)), aut_order(mu))
    for m in mu.parts:
        pref *= Fraction(m**m, factorial(m))
    return pref


def elsv_evaluate(g: int, mu, table: HodgeTable) -> Fraction:
    """H_{g,mu} from the Hodge-integral formula with the supplied table."""
    p = as_partition(mu)
    l = p.length
    if 2 * g - 2 + l <= 0:
        raise UnstableRange(f"ELSV needs 2g-2+l>0, got (g,l)=({g},{l})")
    dim = 3 * g - 3 + l
    total = Fraction(0)
    for k in range(g + 1):
        sign = -1 if k % 2 else 1
        for ks in compositions(dim - k, l):
            val = table.get(Correlator(g, ks, k))
            if not val:
                continue
            term = val
            for m, e in zip(p.parts, ks):
                term *= m**e
            total += sign * term
    return elsv_prefactor(g, p) * total


def _unknowns(g: int, l: int) -> list[Correlator]:
    dim = 3 * g - 3 + l
    out = []
    for k in range(g + 1):
        for shape in partitions_of(dim - k):
            if len(shape) > l:
                continue
            taus = shape + (0,) * (l - len(shape))
            out.append(Correlator(g, taus, k))
    return out


def _monomial_sym(taus: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """m_taus(mu): sum of prod mu_i^{sigma_i} over distinct orderings."""
    total = 0
    for sig in set(permutations(taus)):
        term = 1
        for m, e in zip(mu, sig):
            term *= m**e
        total += term
    return total


def _profile_pool(l: int):
    """Profiles with l distinct parts from {1, primes}, smallest sizes first."""
    vals = [1, 2, 3]
    x = 3
    while len(vals) < l + 24:
        x += 2
        if all(x % q for q in range(2, isqrt(x) + 1)):
            vals.append(x)
    cands = [tuple(sorted(c, reverse=True)) for c in combinations(vals, l)]
    cands.sort(key=lambda c: (sum(c), c))
    return cands


def hodge_invert(g: int, l: int, hurwitz_oracle: Callable[[int, tuple[int, ...]], Fraction]) -> HodgeTable:
    """Solve the linear system the Hodge-integral formula attaches to
    profiles with distinct parts; exact, rank-verified, two held-out checks."""
    if 2 * g - 2 + l <= 0:
        raise UnstableRange(f"(g,l)=({g},{l}) outside 2g-2+l>0")
    unknowns = _unknowns(g, l)
    nu = len(unknowns)

    def row_for(profile: tuple[int, ...]) -> tuple[list[Fraction], Fraction]:
        coeffs = []
        for c in unknowns:
            sign = -1 if c.lam % 2 else 1
            coeffs.append(Fraction(sign * _monomial_sym(c.taus, profile)))
        rhs = hurwitz_oracle(g, profile) / elsv_prefactor(g, Partition(profile))
        return coeffs, rhs

    # incremental exact elimination until full rank
    basis: list[tuple[list[Fraction], Fraction]] = []
    pivots: list[int] = []
    used = []
    pool = _profile_pool(l)
    for profile in pool:
        if len(basis) == nu:
            break
        coeffs, rhs = row_for(profile)
        row = list(coeffs)
        for (brow, brhs), pc in zip(basis, pivots):
            if row[pc]:
                f = row[pc] / brow[pc]
                row = [a - f * b for a, b in zip(row, brow)]
                rhs = rhs - f * brhs
        pivot = next((j for j, a in enumerate(row) if a), None)
        if pivot is None:
            continue
        basis.append((row, rhs))
        pivots.append(pivot)
        used.append(profile)
    if len(basis) < nu:
        raise RankDeficient(
            f"rank {len(basis)} < {nu} unknowns for (g,l)=({g},{l}); "
            f"profiles tried: {used}; pivots: {pivots}"
        )

    # back substitution
    values: dict[int, Fraction] = {}
    for (row, rhs), pc in sorted(zip(basis, pivots), key=lambda t: -t[1]):
        acc = rhs
        for j in range(pc + 1, nu):
            if row[j]:
                acc -= row[j] * values[j]
        values[pc] = acc / row[pc]
    table = HodgeTable({c: values[j] for j, c in enumerate(unknowns)})

    # held-out residual check on two fresh profiles
    held = [pf for pf in pool if pf not in used][:2]
    if len(held) < 2:
        raise RankDeficient("profile pool exhausted before held-out checks")
    for pf in held:
        predicted = elsv_evaluate(g, pf, table)
        actual = hurwitz_oracle(g, pf)
        if predicted != actual:
            raise RankDeficient(f"held-out residual nonzero at profile {pf}")
    return table


_HODGE_CACHE: dict[tuple[int, int], HodgeTable] = {}


def hodge_table(g: int, l: int) -> HodgeTable:
    """Inverted table for (g, l) against the degeneration recursion, cached."""
    key = (g, l)
    if key not in _HODGE_CACHE:
        from .hurwitz import hurwitz_degeneration

        _HODGE_CACHE[key] = hodge_invert(g, l, hurwitz_degeneration)
    return _HODGE_CACHE[key]


# ---------------------------------------------------------------------------
# asymptotics and the Laplace identity


def _ln_fraction(x: Fraction) -> mpmath.mpf:
    return mpmath.log(mpmath.mpmathify(x.numerator)) - mpmath.log(mpmath.mpmathify(x.denominator))


def asymptotic_ratio(g: int, mu, N: int, precision: int = 256):
    """H_{g,N mu} over its predicted growth, divided by the predicted limit;
    approaches 1 as N grows.  Log-space, `precision` bits."""
    p = as_partition(mu)
    l = p.length
    if len(set(p.parts)) != l:
        raise ValueError("profile parts must be distinct")

    def compute(prec: int):
        with mpmath.workprec(prec):
            table = hodge_table(g, l)
            scaled = Partition(tuple(N * m for m in p.parts))
            h = elsv_evaluate(g, scaled, table)
            r = ram_count(g, scaled)
            ln_ratio = _ln_fraction(h)
            ln_ratio -= (3 * g - 3 + Fraction(l, 2)) * mpmath.log(N)
            ln_ratio -= N * p.size
            ln_ratio -= mpmath.loggamma(r + 1)
            # predicted limit (2 pi)^(-l/2) prod mu_i^(-1/2) P_g(mu)
            ln_limit = -Fraction(l, 2) * mpmath.log(2 * mpmath.pi)
            for m in p.parts:
                ln_limit -= mpmath.log(m) / 2
            ln_limit += _ln_fraction(n_point_eval(g, p.parts))
            return mpmath.exp(ln_ratio - ln_limit)

    value = compute(precision)
    check = compute(precision + 64)
    if abs(value - check) > abs(check) * mpmath.mpf(2) ** (-32):
        raise PrecisionLoss(f"fewer than 32 significant bits at precision {precision}")
    with mpmath.workprec(precision):
        return +value


def laplace_check(g: int, l: int, ys, precision: int = 256):
    """Both sides of the Laplace-transform identity at y, as floats:
    sum <tau_k> prod (2k_i-1)!!/(2y_i)^(k_i+1/2)  versus  K_g at s=sqrt(2y)."""
    ys = [Fraction(y) for y in ys]
    if any(y <= 0 for y in ys):
        raise ValueError("y coordinates must be positive")
    if 2 * g - 2 + l <= 0 or len(ys) != l:
        raise UnstableRange(f"(g,l)=({g},{l}) outside 2g-2+l>0")
    with mpmath.workprec(precision):
        dim = 3 * g - 3 + l
        lhs = mpmath.mpf(0)
        for ks in compositions(dim, l):
            c = psi_correlator(g, ks)
            if not c:
                continue
            term = mpmath.mpf(c.numerator) / c.denominator
            for y, k in zip(ys, ks):
                ty = mpmath.mpf(2 * y.numerator) / y.denominator
                term *= double_factorial_odd(k) / (ty**k * mpmath.sqrt(ty))
            lhs += term
        ss = [mpmath.sqrt(mpmath.mpf(2 * y.numerator) / y.denominator) for y in ys]
        rhs = kontsevich_series_eval(g, ss)
        return lhs, rhs
