"""Combinatorial maps on surfaces: trivalent map enumeration, the weighted
edge sum over them, branching graphs built from transposition tuples, the
homotopy-type reduction, and Wick polygon gluings.

A map is a rotation system: sigma cycles darts counterclockwise around each
vertex, alpha is the fixed-point-free edge involution, faces are the orbits
of sigma o alpha.  Face labels are part of the structure; isomorphisms must
preserve them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from . import _kernels
from .errors import BudgetExceeded, NotTransitive, PerimeterMismatch, UnstableRange, UnstableResult


# ---------------------------------------------------------------------------
# rotation-system basics


def perm_cycles(p: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        cyc = []
        x = s
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def face_cycles(sigma: tuple[int, ...], alpha: tuple[int, ...]) -> list[tuple[int, ...]]:
    return perm_cycles(tuple(sigma[alpha[x]] for x in range(len(sigma))))


def is_connected(sigma: tuple[int, ...], alpha: tuple[int, ...]) -> bool:
    n = len(sigma)
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in (sigma[x], alpha[x]):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


@dataclass(frozen=True)
class RibbonMap:
    """Labeled-cell map: (sigma, alpha, face label of each dart)."""

    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    face_label: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(n)) or sorted(self.alpha) != list(range(n)):
            raise ValueError("sigma and alpha must be permutations of the darts")
        if any(self.alpha[x] == x for x in range(n)) or any(self.alpha[self.alpha[x]] != x for x in range(n)):
            raise ValueError("alpha must be a fixed-point-free involution")
        if not is_connected(self.sigma, self.alpha):
            raise ValueError("map must be connected")
        for cyc in face_cycles(self.sigma, self.alpha):
            labs = {self.face_label[x] for x in cyc}
            if len(labs) != 1:
                raise ValueError("face labels must be constant on faces")
        labs = sorted({self.face_label[x] for x in range(n)})
        if labs != list(range(1, len(labs) + 1)):
            raise ValueError("face labels must be 1..n")

    @property
    def n_darts(self) -> int:
        return len(self.sigma)

    @property
    def n_vertices(self) -> int:
        return len(perm_cycles(self.sigma))

    @property
    def n_edges(self) -> int:
        return len(self.sigma) // 2

    @property
    def n_faces(self) -> int:
        return len(face_cycles(self.sigma, self.alpha))

    @property
    def genus(self) -> int:
        chi = self.n_vertices - self.n_edges + self.n_faces
        if chi % 2:
            raise ValueError("odd Euler characteristic")
        return (2 - chi) // 2

    def edge_cell_pairs(self) -> list[tuple[int, int]]:
        """For each edge, the labels of the two cells its sides border."""
        out = []
        for x in range(self.n_darts):
            y = self.alpha[x]
            if x < y:
                out.append((self.face_label[x], self.face_label[y]))
        return out

    def to_json_dict(self) -> dict:
        return {
            "darts": self.n_darts,
            "sigma": list(self.sigma),
            "alpha": list(self.alpha),
            "faceLabels": list(self.face_label),
        }


def _encode_from(m: RibbonMap, root: int) -> tuple:
    """Canonical traversal code rooted at a dart; rooted maps are rigid."""
    order = {root: 0}
    queue = [root]
    while queue:
        x = queue.pop(0)
        for y in (m.sigma[x], m.alpha[x]):
            if y not in order:
                order[y] = len(order)
                queue.append(y)
    n = m.n_darts
    inv = [0] * n
    for old, new in order.items():
        inv[new] = old
    sig = tuple(order[m.sigma[inv[i]]] for i in range(n))
    alp = tuple(order[m.alpha[inv[i]]] for i in range(n))
    lab = tuple(m.face_label[inv[i]] for i in range(n))
    return (sig, alp, lab)


def canonical_form(m: RibbonMap) -> tuple[RibbonMap, int]:
    """Lexicographically minimal rooted code over all root darts, plus |Aut|
    (the number of roots attaining the minimum)."""
    best = None
    hits = 0
    for root in range(m.n_darts):
        code = _encode_from(m, root)
        if best is None or code < best:
            best = code
            hits = 1
        elif code == best:
            hits += 1
    sig, alp, lab = best
    return RibbonMap(sig, alp, lab), hits


@dataclass(frozen=True)
class MapClass:
    """Isomorphism class: canonical representative and automorphism order."""

    rep: RibbonMap
    aut_order: int

    def to_json_dict(self) -> dict:
        d = self.rep.to_json_dict()
        d["autOrder"] = self.aut_order
        return d


# ---------------------------------------------------------------------------
# trivalent map enumeration


def _fixed_trivalent_sigma(v: int) -> tuple[int, ...]:
    return tuple(x - x % 3 + (x + 1) % 3 for x in range(3 * v))


def _centralizer_generators(v: int) -> list[tuple[int, ...]]:
    nd = 3 * v
    gens = []
    rot0 = list(range(nd))
    rot0[0], rot0[1], rot0[2] = 1, 2, 0
    gens.append(tuple(rot0))
    if v >= 2:
        swap = list(range(nd))
        for j in range(3):
            swap[j], swap[3 + j] = 3 + j, j
        gens.append(tuple(swap))
        cyc = [(3 * ((x // 3 + 1) % v)) + x % 3 for x in range(nd)]
        gens.append(tuple(cyc))
    return gens


def _act(pi: tuple[int, ...], alpha: tuple[int, ...], labels: tuple[int, ...]):
    nd = len(pi)
    a2 = [0] * nd
    l2 = [0] * nd
    for x in range(nd):
        a2[pi[x]] = pi[alpha[x]]
        l2[pi[x]] = labels[x]
    return tuple(a2), tuple(l2)


def enumerate_trivalent(g: int, n: int, max_vertices: int = 8, backend: str | None = None) -> list[MapClass]:
    """All isomorphism classes of connected trivalent maps with n labeled
    cells on the genus-g surface, with automorphism orders."""
    if 2 * g - 2 + n <= 0:
        raise UnstableRange(f"(g,n)=({g},{n}) outside 2g-2+n>0")
    v = 2 * (2 * g - 2 + n)
    if v > max_vertices:
        raise BudgetExceeded(f"{v} vertices exceeds cap {max_vertices}")
    sigma = _fixed_trivalent_sigma(v)
    alphas = _kernels.trivalent_matchings(v, n, g, backend=backend)

    candidates = set()
    for row in alphas:
        alpha = tuple(int(x) for x in row)
        faces = face_cycles(sigma, alpha)
        for labs in permutations(range(1, n + 1)):
            label = [0] * (3 * v)
            for cyc, lb in zip(faces, labs):
                for x in cyc:
                    label[x] = lb
            candidates.add((alpha, tuple(label)))

    gens = _centralizer_generators(v)
    group_order = factorial(v) * 3**v
    classes = []
    remaining = set(candidates)
    while remaining:
        seed = remaining.pop()
        orbit = {seed}
        stack = [seed]
        while stack:
            cand = stack.pop()
            for pi in gens:
                img = _act(pi, cand[0], cand[1])
                if img not in orbit:
                    orbit.add(img)
                    stack.append(img)
        remaining -= orbit
        if group_order % len(orbit):
            raise ArithmeticError("orbit size does not divide the group order")
        aut = group_order // len(orbit)
        rep, aut_canonical = canonical_form(RibbonMap(sigma, seed[0], seed[1]))
        if aut != aut_canonical:
            raise ArithmeticError(f"automorphism count mismatch: {aut} vs {aut_canonical}")
        classes.append(MapClass(rep, aut))
    classes.sort(key=lambda c: (c.rep.sigma, c.rep.alpha, c.rep.face_label))
    return classes


_TRIVALENT_CACHE: dict[tuple[int, int], list[MapClass]] = {}


def trivalent_classes(g: int, n: int, max_vertices: int = 8) -> list[MapClass]:
    key = (g, n)
    if key not in _TRIVALENT_CACHE:
        _TRIVALENT_CACHE[key] = enumerate_trivalent(g, n, max_vertices)
    return _TRIVALENT_CACHE[key]


def kontsevich_sum(g: int, n: int, s, max_vertices: int = 8) -> Fraction:
    """Sum over trivalent classes of 2^(2g-2+n)/|Aut| prod_e 1/(s_i+s_j)."""
    s = [Fraction(x) for x in s]
    if len(s) != n:
        raise ValueError("need one coordinate per cell")
    if any(x <= 0 for x in s):
        raise ValueError("coordinates must be positive")
    total = Fraction(0)
    for cls in trivalent_classes(g, n, max_vertices):
        term = Fraction(2 ** (2 * g - 2 + n), cls.aut_order)
        for i, j in cls.rep.edge_cell_pairs():
            term /= s[i - 1] + s[j - 1]
        total += term
    return total


# ---------------------------------------------------------------------------
# branching graphs


@dataclass(frozen=True)
class BranchingGraph:
    """Edge-labeled map built from a transposition tuple: vertices are the
    sheets, edge k joins the two sheets its transposition swaps, rotations
    follow increasing labels."""

    n_sheets: int
    pairs: tuple[tuple[int, int], ...]  # 1-based sheet pairs, in label order
    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    perimeters: tuple[int, ...]  # weakly decreasing
    face_perimeters: tuple[int, ...]  # aligned with faces listed by least dart
    genus: int

    @property
    def n_edges(self) -> int:
        return len(self.pairs)


def branching_graph_from_tuple(d: int, transpositions) -> BranchingGraph:
    """Build and verify the branching graph of a transposition tuple."""
    pairs = []
    for t in transpositions:
        a, b = sorted(t)
        if not (1 <= a < b <= d):
            raise ValueError(f"invalid transposition {t!r} for degree {d}")
        pairs.append((a, b))
    r = len(pairs)

    if d == 1 and r == 0:
        return BranchingGraph(1, (), (), (), (1,), (1,), 0)

    # connectivity of the support graph on sheets
    parent = list(range(d + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    if len({find(x) for x in range(1, d + 1)}) != 1:
        raise NotTransitive("transposition supports do not connect all sheets")

    # darts 2k (at pairs[k][0]) and 2k+1 (at pairs[k][1]); rotations by label
    incident: list[list[int]] = [[] for _ in range(d + 1)]
    for k, (a, b) in enumerate(pairs):
        incident[a].append(2 * k)
        incident[b].append(2 * k + 1)
    sigma = [0] * (2 * r)
    for v in range(1, d + 1):
        darts = incident[v]  # already in increasing label order
        for i, x in enumerate(darts):
            sigma[x] = darts[(i + 1) % len(darts)]
    alpha = [x ^ 1 for x in range(2 * r)]

    faces = face_cycles(tuple(sigma), tuple(alpha))
    per = []
    for cyc in faces:
        # sigma o alpha traverses each boundary against the clockwise edge
        # listing, so the positive angle between consecutive edges is
        # (label_next - label_here) mod r, with 0 meaning a full turn
        units = 0
        for i, x in enumerate(cyc):
            lab_here = cyc[i] // 2 + 1
            lab_next = cyc[(i + 1) % len(cyc)] // 2 + 1
            units += (lab_next - lab_here) % r or r
        if units % r:
            raise PerimeterMismatch(f"non-integral perimeter {units}/{r}")
        per.append(units // r)
    face_per = tuple(per)
    per.sort(reverse=True)

    # the perimeters must reproduce the cycle type of the ordered product
    prod = list(range(d + 1))
    for a, b in pairs:
        prod[a], prod[b] = prod[b], prod[a]
    seen = [False] * (d + 1)
    ctype = []
    for s0 in range(1, d + 1):
        if seen[s0]:
            continue
        ln, x = 0, s0
        while not seen[x]:
            seen[x] = True
            x = prod[x]
            ln += 1
        ctype.append(ln)
    ctype.sort(reverse=True)
    if ctype != per:
        raise PerimeterMismatch(f"perimeters {per} do not match product type {ctype}")
    if sum(per) != d:
        raise PerimeterMismatch("perimeters do not sum to the sheet count")

    chi = d - r + len(per)
    if chi % 2:
        raise PerimeterMismatch("odd Euler characteristic")
    genus = (2 - chi) // 2
    if genus < 0:
        raise PerimeterMismatch("negative genus")
    return BranchingGraph(d, tuple(pairs), tuple(sigma), tuple(alpha), tuple(per), face_per, genus)


def branching_graph_canonical_key(h: BranchingGraph) -> tuple:
    """Complete isomorphism invariant: minimal first-appearance sheet
    relabeling along the label order, branching where an edge introduces
    two fresh sheets at once."""
    best: list[tuple] = []

    def rec(i: int, mapping: dict[int, int], out: list):
        if i == len(h.pairs):
            best.append(tuple(out))
            return
        a, b = h.pairs[i]
        fresh = [v for v in (a, b) if v not in mapping]
        if len(fresh) == 2:
            for first, second in ((a, b), (b, a)):
                m2 = dict(mapping)
                m2[first] = len(m2) + 1
                m2[second] = len(m2) + 1
                rec(i + 1, m2, out + [tuple(sorted((m2[a], m2[b])))])
        else:
            m2 = dict(mapping)
            for v in fresh:
                m2[v] = len(m2) + 1
            rec(i + 1, m2, out + [tuple(sorted((m2[a], m2[b])))])

    rec(0, {}, [])
    return (h.n_sheets, min(best)) if best else (h.n_sheets, ())


def branching_graph_aut_order(h: BranchingGraph) -> int:
    """Order of the group of sheet relabelings fixing every labeled edge."""
    pairs = [frozenset(p) for p in h.pairs]
    count = 0
    for perm in permutations(range(1, h.n_sheets + 1)):
        m = dict(zip(range(1, h.n_sheets + 1), perm))
        if all(frozenset((m[a], m[b])) == pairs[k] for k, (a, b) in enumerate(h.pairs)):
            count += 1
    return count


def homotopy_type(h: BranchingGraph | RibbonMap) -> MapClass:
    """Forget edge labels, then repeatedly delete univalent vertices and
    dissolve 2-valent ones; cell count is preserved.

    A branching graph needs distinct cell perimeters so the cells stay
    canonically distinguishable once the edge labels are forgotten; they
    are labeled by decreasing perimeter."""
    if isinstance(h, BranchingGraph):
        if len(set(h.face_perimeters)) != len(h.face_perimeters):
            raise ValueError("cell perimeters must be distinct to forget edge labels")
        sigma = list(h.sigma)
        alpha = list(h.alpha)
        faces = face_cycles(tuple(sigma), tuple(alpha))
        label = [0] * len(sigma)
        order = sorted(range(len(faces)), key=lambda i: -h.face_perimeters[i])
        for lb, fi in enumerate(order, start=1):
            for x in faces[fi]:
                label[x] = lb
        n_cells = len(faces)
        genus = h.genus
    else:
        sigma = list(h.sigma)
        alpha = list(h.alpha)
        label = list(h.face_label)
        n_cells = h.n_faces
        genus = h.genus
    if 2 * genus - 2 + n_cells <= 0:
        raise UnstableResult(f"homotopy type unstable: (g,n)=({genus},{n_cells})")

    alive = set(range(len(sigma)))

    def rotation(dart):
        # live rotation successor at the vertex of `dart`
        y = sigma[dart]
        while y not in alive:
            y = sigma[y]
        return y

    changed = True
    while changed:
        changed = False
        # univalent vertices: dart whose live rotation is itself
        for x in sorted(alive):
            if x not in alive:
                continue
            if rotation(x) == x:
                alive.discard(x)
                alive.discard(alpha[x])
                changed = True
        # 2-valent vertices: rotation orbit of size two
        for x in sorted(alive):
            if x not in alive:
                continue
            y = rotation(x)
            if y == x or rotation(y) != x:
                continue
            a, b = alpha[x], alpha[y]
            if a == y:  # the two darts close a circle component
                alive.discard(x)
                alive.discard(y)
            else:
                alive.discard(x)
                alive.discard(y)
                alpha[a], alpha[b] = b, a
            changed = True
    if not alive:
        raise UnstableResult("nothing left after reduction")

    live = sorted(alive)
    pos = {x: i for i, x in enumerate(live)}
    sig2 = tuple(pos[rotation(x)] for x in live)
    alp2 = tuple(pos[alpha[x]] for x in live)
    lab_vals = sorted({label[x] for x in live})
    lab_map = {lv: i + 1 for i, lv in enumerate(lab_vals)}
    lab2 = tuple(lab_map[label[x]] for x in live)
    reduced = RibbonMap(sig2, alp2, lab2)
    if reduced.n_faces != n_cells:
        raise UnstableResult("reduction changed the cell count")
    rep, aut = canonical_form(reduced)
    return MapClass(rep, aut)


# ---------------------------------------------------------------------------
# Wick polygon gluings


def wick_moment(ks, max_total: int = 12) -> dict[int, int]:
    """Gaussian moment of a product of traced powers, as a polynomial in the
    matrix size: sum over side pairings of N^(vertex count).  Returned as an
    exponent -> coefficient dict; zero polynomial for odd total degree."""
    ks = [int(k) for k in ks]
    if any(k < 1 for k in ks):
        raise ValueError("polygon sizes must be positive")
    total = sum(ks)
    if total > max_total:
        raise BudgetExceeded(f"total degree {total} exceeds cap {max_total}")
    if total % 2:
        return {}

    # sides s = (i, j): polygon i, side j from corner j to j+1 (mod k_i)
    sides = [(i, j) for i, k in enumerate(ks) for j in range(k)]
    corner_id = {}
    for i, k in enumerate(ks):
        for j in range(k):
            corner_id[(i, j)] = len(corner_id)
    ncorner = len(corner_id)

    poly: dict[int, int] = {}

    def glue(pairing):
        parent = list(range(ncorner))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx

        for (i, j), (i2, j2) in pairing:
            # orientation-reversing identification: head to tail
            union(corner_id[(i, j)], corner_id[(i2, (j2 + 1) % ks[i2])])
            union(corner_id[(i, (j + 1) % ks[i])], corner_id[(i2, j2)])
        nv = len({find(x) for x in range(ncorner)})
        poly[nv] = poly.get(nv, 0) + 1

    def rec(avail, acc):
        if not avail:
            glue(acc)
            return
        first = avail[0]
        for idx in range(1, len(avail)):
            other = avail[idx]
            rest = avail[1:idx] + avail[idx + 1 :]
            rec(rest, acc + [(first, other)])

    rec(sides, [])
    return poly


def poly_str(poly: dict[int, int], var: str = "N") -> str:
    if not poly:
        return "0"
    terms = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        if c == 0:
            continue
        if e == 0:
            terms.append(f"{c}")
        elif e == 1:
            terms.append(f"{var}" if c == 1 else f"{c}*{var}")
        else:
            terms.append(f"{var}^{e}" if c == 1 else f"{c}*{var}^{e}")
    return " + ".join(terms) if terms else "0"
