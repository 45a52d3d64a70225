"""Truncated Hurwitz generating function and exact verification of its Toda
equation.

The series lives in monomials q^d p_mu lambda^L with q-degree locked to
d = |mu| (q tracks e^{y0}); coefficients are exact rationals.  Truncation is
d <= dmax, -2 <= L <= lmax.  The shifted combination
H(y0+lambda) + H(y0-lambda) - 2 H has lambda-order >= 0 term by term, which
is asserted, so its exponential is well defined in the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .core import partitions_of, ram_count
from .errors import BudgetExceeded

Key = tuple[tuple[int, ...], int]  # (partition mu sorted desc, lambda exponent)


@dataclass
class TruncatedSeries:
    dmax: int
    lmax: int
    coeffs: dict[Key, Fraction] = field(default_factory=dict)

    def add(self, mu: tuple[int, ...], lam: int, value: Fraction):
        if not value:
            return
        if sum(mu) > self.dmax or lam > self.lmax or lam < -2:
            return
        key = (mu, lam)
        new = self.coeffs.get(key, Fraction(0)) + value
        if new:
            self.coeffs[key] = new
        else:
            self.coeffs.pop(key, None)

    def coeff(self, mu, lam: int) -> Fraction:
        return self.coeffs.get((tuple(sorted(mu, reverse=True)), lam), Fraction(0))

    def to_json_dict(self) -> dict:
        rows = []
        for (mu, lam), v in sorted(self.coeffs.items()):
            rows.append({"mu": list(mu), "lambda": lam, "num": str(v.numerator), "den": str(v.denominator)})
        return {"dmax": self.dmax, "lmax": self.lmax, "coeffs": rows}


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    out = TruncatedSeries(a.dmax, a.lmax)
    for (mu1, l1), v1 in a.coeffs.items():
        for (mu2, l2), v2 in b.coeffs.items():
            if sum(mu1) + sum(mu2) > out.dmax or l1 + l2 > out.lmax:
                continue
            out.add(tuple(sorted(mu1 + mu2, reverse=True)), l1 + l2, v1 * v2)
    return out


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with no constant term; needs q-order >= 1 and
    lambda-order >= 0 on every monomial."""
    for (mu, lam) in s.coeffs:
        if sum(mu) < 1 or lam < 0:
            raise ValueError(f"series_exp needs q-order >= 1 and lambda >= 0, got {(mu, lam)}")
    out = TruncatedSeries(s.dmax, s.lmax)
    out.add((), 0, Fraction(1))
    power = TruncatedSeries(s.dmax, s.lmax)
    power.add((), 0, Fraction(1))
    for k in range(1, s.dmax + 1):
        power = series_mul(power, s)
        if not power.coeffs:
            break
        for (mu, lam), v in power.coeffs.items():
            out.add(mu, lam, v / factorial(k))
    return out


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """log of a series of the form 1 + S with S constant-free."""
    rest = TruncatedSeries(s.dmax, s.lmax)
    for (mu, lam), v in s.coeffs.items():
        if mu == () and lam == 0:
            if v != 1:
                raise ValueError("series_log needs constant term 1")
        else:
            rest.add(mu, lam, v)
    out = TruncatedSeries(s.dmax, s.lmax)
    power = TruncatedSeries(s.dmax, s.lmax)
    power.add((), 0, Fraction(1))
    for k in range(1, s.dmax + 1):
        power = series_mul(power, rest)
        if not power.coeffs:
            break
        sign = Fraction(1 if k % 2 else -1, k)
        for (mu, lam), v in power.coeffs.items():
            out.add(mu, lam, sign * v)
    return out


def build_H(dmax: int, lmax: int, corruption: dict | None = None) -> TruncatedSeries:
    """Fill the truncated Hurwitz generating function from the degeneration
    recursion: coefficient of q^d p_mu lambda^(2g-2) is H_{g,mu}/(2g-2+d+l)!.

    `corruption` optionally adds deltas keyed by (g, mu) for sensitivity
    checks."""
    if dmax > 6 or lmax > 6:
        raise BudgetExceeded("build_H caps at dmax, lmax <= 6")
    from .hurwitz import hurwitz_degeneration

    out = TruncatedSeries(dmax, lmax)
    corruption = corruption or {}
    for d in range(1, dmax + 1):
        for mu in partitions_of(d):
            g = 0
            while 2 * g - 2 <= lmax:
                h = hurwitz_degeneration(g, mu)
                h += corruption.get((g, mu), 0)
                if h:
                    r = ram_count(g, mu)
                    out.add(mu, 2 * g - 2, Fraction(h, factorial(r)))
                g += 1
    return out


def _shift_combination(h: TruncatedSeries) -> TruncatedSeries:
    """H(y0+lambda) + H(y0-lambda) - 2H: the q^d coefficient picks up
    e^(d lambda) + e^(-d lambda) - 2 = 2 sum_{j>=1} (d lambda)^(2j)/(2j)!."""
    out = TruncatedSeries(h.dmax, h.lmax)
    for (mu, lam), v in h.coeffs.items():
        d = sum(mu)
        j = 2
        while lam + j <= h.lmax:
            out.add(mu, lam + j, 2 * v * Fraction(d**j, factorial(j)))
            j += 2
    for (mu, lam) in out.coeffs:
        if lam < 0:
            raise AssertionError("shift combination must have lambda-order >= 0")
    return out


def _toda_rhs(h: TruncatedSeries) -> TruncatedSeries:
    """lambda^2 e^(-y0) d^2 H / dp_1 dy_0, coefficient-wise."""
    out = TruncatedSeries(h.dmax, h.lmax)
    for (mu, lam), v in h.coeffs.items():
        d = sum(mu)
        m1 = mu.count(1)
        if not m1:
            continue
        reduced = list(mu)
        reduced.remove(1)
        out.add(tuple(reduced), lam + 2, v * m1 * d)
    return out


def toda_residual(h: TruncatedSeries) -> Fraction:
    """Largest |coefficient| of exp(shift) - rhs inside the trustworthy
    window d <= dmax-1, lambda-order <= lmax-2."""
    lhs = series_exp(_shift_combination(h))
    rhs = _toda_rhs(h)
    worst = Fraction(0)
    keys = set(lhs.coeffs) | set(rhs.coeffs)
    for mu, lam in keys:
        if sum(mu) > h.dmax - 1 or lam > h.lmax - 2:
            continue
        diff = lhs.coeffs.get((mu, lam), Fraction(0)) - rhs.coeffs.get((mu, lam), Fraction(0))
        if abs(diff) > worst:
            worst = abs(diff)
    return worst


# ---------------------------------------------------------------------------
# the one-variable restriction p_1 = 1, p_{i>=2} = 0


def htilde_coeffs(h: TruncatedSeries) -> dict[tuple[int, int], Fraction]:
    """Restrict to the trivial-profile sector: keys (d, lambda)."""
    out: dict[tuple[int, int], Fraction] = {}
    for (mu, lam), v in h.coeffs.items():
        if any(m != 1 for m in mu):
            continue
        key = (sum(mu), lam)
        out[key] = out.get(key, Fraction(0)) + v
    return out


def htilde_residual(h: TruncatedSeries) -> Fraction:
    """Residual of exp(shift) = lambda^2 e^(-y0) d^2Htilde/dy0^2 in the same
    window, for the one-variable restriction."""
    ht = htilde_coeffs(h)
    dmax, lmax = h.dmax, h.lmax

    # shift combination
    delta: dict[tuple[int, int], Fraction] = {}
    for (d, lam), v in ht.items():
        j = 2
        while lam + j <= lmax:
            key = (d, lam + j)
            delta[key] = delta.get(key, Fraction(0)) + 2 * v * Fraction(d**j, factorial(j))
            j += 2
    # exp
    lhs: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    power: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for k in range(1, dmax + 1):
        nxt: dict[tuple[int, int], Fraction] = {}
        for (d1, l1), v1 in power.items():
            for (d2, l2), v2 in delta.items():
                if d1 + d2 > dmax or l1 + l2 > lmax:
                    continue
                key = (d1 + d2, l1 + l2)
                nxt[key] = nxt.get(key, Fraction(0)) + v1 * v2
        power = nxt
        if not power:
            break
        for key, v in power.items():
            lhs[key] = lhs.get(key, Fraction(0)) + v / factorial(k)
    # rhs
    rhs: dict[tuple[int, int], Fraction] = {}
    for (d, lam), v in ht.items():
        if lam + 2 > lmax:
            continue
        key = (d - 1, lam + 2)
        rhs[key] = rhs.get(key, Fraction(0)) + v * d * d
    worst = Fraction(0)
    for key in set(lhs) | set(rhs):
        d, lam = key
        if d > dmax - 1 or lam > lmax - 2:
            continue
        diff = lhs.get(key, Fraction(0)) - rhs.get(key, Fraction(0))
        if abs(diff) > worst:
            worst = abs(diff)
    return worst
