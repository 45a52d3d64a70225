"""numba backend: jitted depth-first enumeration and per-sample tree loops."""

from __future__ import annotations

from itertools import combinations

import numpy as np
from numba import njit, prange

# ---------------------------------------------------------------------------
# transposition tuple counting


@njit(cache=True)
def _type_of(p, lens, mark):
    d = p.shape[0]
    for i in range(d):
        mark[i] = 0
    cnt = 0
    for start in range(d):
        if mark[start]:
            continue
        ln = 0
        x = start
        while not mark[x]:
            mark[x] = 1
            x = p[x]
            ln += 1
        lens[cnt] = ln
        cnt += 1
    # insertion sort descending
    for i in range(1, cnt):
        key = lens[i]
        j = i - 1
        while j >= 0 and lens[j] < key:
            lens[j + 1] = lens[j]
            j -= 1
        lens[j + 1] = key
    return cnt


@njit(cache=True)
def _iter_class(p, parent, comp1, cyc1, start, r, ta, tb, ell, tgt, transitive, lens, mark):
    # explicit-stack DFS over tuple positions start..r-1
    nt = ta.shape[0]
    total = 0
    choice = np.full(r + 1, -1, dtype=np.int64)
    undo = np.full(r + 1, -1, dtype=np.int64)
    cycs = np.empty(r + 1, dtype=np.int64)
    comps = np.empty(r + 1, dtype=np.int64)
    cycs[start] = cyc1
    comps[start] = comp1
    level = start
    while level >= start:
        t = choice[level] + 1
        choice[level] = t
        if t >= nt:
            choice[level] = -1
            level -= 1
            if level >= start:
                tt = choice[level]
                a = ta[tt]
                b = tb[tt]
                tmp = p[a]
                p[a] = p[b]
                p[b] = tmp
                if undo[level] >= 0:
                    parent[undo[level]] = undo[level]
                    undo[level] = -1
            continue
        a = ta[t]
        b = tb[t]
        same = False
        x = p[a]
        while x != a:
            if x == b:
                same = True
                break
            x = p[x]
        cyc2 = cycs[level] + 1 if same else cycs[level] - 1
        rem = r - level - 1
        diff = cyc2 - ell if cyc2 >= ell else ell - cyc2
        if diff > rem or ((diff + rem) & 1) != 0:
            continue
        ra = a
        while parent[ra] != ra:
            ra = parent[ra]
        rb = b
        while parent[rb] != rb:
            rb = parent[rb]
        comp2 = comps[level]
        ur = -1
        if ra != rb:
            parent[rb] = ra
            comp2 -= 1
            ur = rb
        if transitive and comp2 - 1 > rem:
            if ur >= 0:
                parent[ur] = ur
            continue
        if level + 1 == r:
            # leaf; cyc2 == ell is implied by the pruning with rem == 0
            ok = (not transitive) or comp2 == 1
            if ok:
                tmp = p[a]
                p[a] = p[b]
                p[b] = tmp
                cnt = _type_of(p, lens, mark)
                match = cnt == ell
                if match:
                    for i in range(ell):
                        if lens[i] != tgt[i]:
                            match = False
                            break
                if match:
                    total += 1
                tmp = p[a]
                p[a] = p[b]
                p[b] = tmp
            if ur >= 0:
                parent[ur] = ur
            continue
        tmp = p[a]
        p[a] = p[b]
        p[b] = tmp
        undo[level] = ur
        cycs[level + 1] = cyc2
        comps[level + 1] = comp2
        level += 1
    return total


@njit(cache=True, parallel=True)
def _count_class_parallel(d, r, ta, tb, ell, tgt, transitive):
    nt = ta.shape[0]
    totals = np.zeros(nt, dtype=np.int64)
    for t0 in prange(nt):
        p = np.empty(d, dtype=np.int64)
        parent = np.empty(d, dtype=np.int64)
        lens = np.empty(d, dtype=np.int64)
        mark = np.empty(d, dtype=np.int64)
        for i in range(d):
            p[i] = i
            parent[i] = i
        a = ta[t0]
        b = tb[t0]
        p[a], p[b] = p[b], p[a]
        parent[b] = a
        if r == 1:
            ok = d - 1 == ell and ((not transitive) or d == 2)
            if ok:
                cnt = _type_of(p, lens, mark)
                match = cnt == ell
                if match:
                    for i in range(ell):
                        if lens[i] != tgt[i]:
                            match = False
                if match:
                    totals[t0] = 1
        else:
            totals[t0] = _iter_class(p, parent, d - 1, d - 1, 1, r, ta, tb, ell, tgt, transitive, lens, mark)
    return totals.sum()


@njit(cache=True)
def _dist_to(p, q, mark):
    # transpositions needed to turn p into q: d - #cycles(p^{-1} q)
    d = p.shape[0]
    for i in range(d):
        mark[i] = 0
    # iterate cycles of x -> pinv[q[x]]; avoid materializing pinv by walking
    # y = q[x]; find pinv[y] via linear scan is O(d) each, d small so fine
    cnt = 0
    for start in range(d):
        if mark[start]:
            continue
        x = start
        while not mark[x]:
            mark[x] = 1
            y = q[x]
            nxt = 0
            for j in range(d):
                if p[j] == y:
                    nxt = j
                    break
            x = nxt
        cnt += 1
    return d - cnt


@njit(cache=True)
def _iter_fixed(p, parent, comp1, start, r, ta, tb, tgtp, transitive, mark):
    nt = ta.shape[0]
    total = 0
    choice = np.full(r + 1, -1, dtype=np.int64)
    undo = np.full(r + 1, -1, dtype=np.int64)
    comps = np.empty(r + 1, dtype=np.int64)
    comps[start] = comp1
    level = start
    d = p.shape[0]
    while level >= start:
        t = choice[level] + 1
        choice[level] = t
        if t >= nt:
            choice[level] = -1
            level -= 1
            if level >= start:
                tt = choice[level]
                a = ta[tt]
                b = tb[tt]
                tmp = p[a]
                p[a] = p[b]
                p[b] = tmp
                if undo[level] >= 0:
                    parent[undo[level]] = undo[level]
                    undo[level] = -1
            continue
        a = ta[t]
        b = tb[t]
        tmp = p[a]
        p[a] = p[b]
        p[b] = tmp
        rem = r - level - 1
        dist = _dist_to(p, tgtp, mark)
        if dist > rem or ((dist + rem) & 1) != 0:
            tmp = p[a]
            p[a] = p[b]
            p[b] = tmp
            continue
        ra = a
        while parent[ra] != ra:
            ra = parent[ra]
        rb = b
        while parent[rb] != rb:
            rb = parent[rb]
        comp2 = comps[level]
        ur = -1
        if ra != rb:
            parent[rb] = ra
            comp2 -= 1
            ur = rb
        if transitive and comp2 - 1 > rem:
            if ur >= 0:
                parent[ur] = ur
            tmp = p[a]
            p[a] = p[b]
            p[b] = tmp
            continue
        if level + 1 == r:
            # dist == 0 here, so p equals the target
            if (not transitive) or comp2 == 1:
                total += 1
            if ur >= 0:
                parent[ur] = ur
            tmp = p[a]
            p[a] = p[b]
            p[b] = tmp
            continue
        undo[level] = ur
        comps[level + 1] = comp2
        level += 1
    return total


@njit(cache=True, parallel=True)
def _count_fixed_parallel(d, r, ta, tb, tgtp, transitive):
    nt = ta.shape[0]
    totals = np.zeros(nt, dtype=np.int64)
    for t0 in prange(nt):
        p = np.empty(d, dtype=np.int64)
        parent = np.empty(d, dtype=np.int64)
        mark = np.empty(d, dtype=np.int64)
        for i in range(d):
            p[i] = i
            parent[i] = i
        a = ta[t0]
        b = tb[t0]
        p[a], p[b] = p[b], p[a]
        parent[b] = a
        if r == 1:
            good = True
            for i in range(d):
                if p[i] != tgtp[i]:
                    good = False
                    break
            if good and ((not transitive) or d == 2):
                totals[t0] = 1
        else:
            totals[t0] = _iter_fixed(p, parent, d - 1, 1, r, ta, tb, tgtp, transitive, mark)
    return totals.sum()


def _transposition_arrays(d):
    pairs = list(combinations(range(d), 2))
    ta = np.array([a for a, _ in pairs], dtype=np.int64)
    tb = np.array([b for _, b in pairs], dtype=np.int64)
    return ta, tb


def count_tuples_class(d, r, target_type, transitive):
    if d == 1:
        return 1 if (r == 0 and target_type == (1,)) else 0
    if r == 0:
        ident = target_type == (1,) * d
        return 1 if ident and not transitive else 0
    ta, tb = _transposition_arrays(d)
    tgt = np.array(target_type, dtype=np.int64)
    return int(_count_class_parallel(d, r, ta, tb, len(target_type), tgt, transitive))


def count_tuples_fixed(d, r, target_perm, transitive):
    tgtp = np.array(target_perm, dtype=np.int64)
    if d == 1:
        return 1 if r == 0 else 0
    if r == 0:
        return 1 if all(target_perm[i] == i for i in range(d)) and not (transitive and d > 1) else 0
    ta, tb = _transposition_arrays(d)
    return int(_count_fixed_parallel(d, r, ta, tb, tgtp, transitive))


# ---------------------------------------------------------------------------
# edge-tree sampling statistics


@njit(cache=True)
def _decode_pruefer(code, eu, ev, degree):
    # classic O(n) decode; code entries in [0, n)
    n = code.shape[0] + 2
    for i in range(n):
        degree[i] = 1
    for i in range(n - 2):
        degree[code[i]] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(n - 2):
        v = code[i]
        eu[i] = leaf
        ev[i] = v
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    eu[n - 2] = leaf
    ev[n - 2] = n - 1


def decode_pruefer_batch(codes):
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    B, nm2 = codes.shape
    n = nm2 + 2
    out = np.empty((B, n - 1, 2), dtype=np.int64)
    _decode_batch_loop(codes, out)
    return out


@njit(cache=True, parallel=True)
def _decode_batch_loop(codes, out):
    B = codes.shape[0]
    n = codes.shape[1] + 2
    for s in prange(B):
        eu = np.empty(n - 1, dtype=np.int64)
        ev = np.empty(n - 1, dtype=np.int64)
        degree = np.empty(n, dtype=np.int64)
        _decode_pruefer(codes[s], eu, ev, degree)
        for i in range(n - 1):
            out[s, i, 0] = eu[i]
            out[s, i, 1] = ev[i]


@njit(cache=True)
def _tree_stats_one(code, root, top, labels, out, s):
    n = code.shape[0] + 2
    ne = n - 1
    eu = np.empty(ne, dtype=np.int64)
    ev = np.empty(ne, dtype=np.int64)
    degree = np.empty(n, dtype=np.int64)
    _decode_pruefer(code, eu, ev, degree)

    # label-sorted incidence (CSR).  labels is a permutation of 1..n-1 over
    # construction order; process edges in increasing label order so each
    # vertex's slots come out sorted by label.
    order = np.empty(ne, dtype=np.int64)
    for i in range(ne):
        order[labels[i] - 1] = i
    deg = np.zeros(n, dtype=np.int64)
    for i in range(ne):
        deg[eu[i]] += 1
        deg[ev[i]] += 1
    offs = np.empty(n + 1, dtype=np.int64)
    offs[0] = 0
    for v in range(n):
        offs[v + 1] = offs[v] + deg[v]
    fill = np.zeros(n, dtype=np.int64)
    slot_other = np.empty(2 * ne, dtype=np.int64)
    slot_edge = np.empty(2 * ne, dtype=np.int64)
    slot_vertex = np.empty(2 * ne, dtype=np.int64)
    eslot_u = np.empty(ne, dtype=np.int64)
    eslot_v = np.empty(ne, dtype=np.int64)
    for k in range(ne):
        e = order[k]
        u = eu[e]
        v = ev[e]
        su = offs[u] + fill[u]
        fill[u] += 1
        slot_other[su] = v
        slot_edge[su] = e
        slot_vertex[su] = u
        eslot_u[e] = su
        sv = offs[v] + fill[v]
        fill[v] += 1
        slot_other[sv] = u
        slot_edge[sv] = e
        slot_vertex[sv] = v
        eslot_v[e] = sv

    # boundary walk: next edge at w is the label-cyclic successor of the
    # arrival edge; starting dart leaves the root along its smallest label.
    m = 2 * ne
    walk_edge = np.empty(m, dtype=np.int64)
    pos1 = np.full(ne, -1, dtype=np.int64)
    pos2 = np.full(ne, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    psi = np.zeros(n, dtype=np.int64)
    psi[root] = 1
    seen = np.zeros(n, dtype=np.int64)
    seen[root] = 1
    nseen = 1
    cur = offs[root]  # dart (root -> other) with smallest label at root
    for step in range(m):
        e = slot_edge[cur]
        walk_edge[step] = e
        if pos1[e] < 0:
            pos1[e] = step
        else:
            pos2[e] = step
        w = slot_other[cur]
        if not seen[w]:
            seen[w] = 1
            nseen += 1
            psi[w] = nseen
            parent[w] = slot_vertex[cur]
            parent_edge[w] = e
            depth[w] = depth[slot_vertex[cur]] + 1
        # slot of edge e at w
        sw = eslot_u[e] if eu[e] == w else eslot_v[e]
        nxt = sw + 1
        if nxt == offs[w + 1]:
            nxt = offs[w]
        cur = nxt

    trunk = depth[top] + 1
    e_t = parent_edge[top]
    # child of root on the trunk
    c1 = top
    while parent[c1] != root:
        c1 = parent[c1]
    e_r = parent_edge[c1]
    rootcomp = n - (pos2[e_r] - pos1[e_r] + 1) // 2

    # angle slots in units of 1/(n-1); slot k sits between walk positions k, k+1
    nm1 = n - 1
    total_units = n * nm1
    pr = np.int64(0)
    q2 = pos2[e_r]
    # lambda_R ends at the first e_t traversal cyclically after q2
    p_end = pos1[e_t]
    if e_t == e_r:
        p_end = pos1[e_r]
    # walk cyclically from q2 (exclusive) to p_end (exclusive) summing slots;
    # slot at position j uses edges walk_edge[j], walk_edge[(j+1) % m]
    j = (q2 + 1) % m
    while j != p_end:
        e1 = walk_edge[j]
        e2 = walk_edge[(j + 1) % m]
        ang = (labels[e2] - labels[e1]) % nm1
        if ang == 0:
            ang = nm1
        pr += ang
        j = (j + 1) % m
    # junction slots at q2 and p_end
    e1 = walk_edge[q2]
    e2 = walk_edge[(q2 + 1) % m]
    ang_q = (labels[e2] - labels[e1]) % nm1
    if ang_q == 0:
        ang_q = nm1
    e1 = walk_edge[p_end]
    e2 = walk_edge[(p_end + 1) % m]
    ang_p = (labels[e2] - labels[e1]) % nm1
    if ang_p == 0:
        ang_p = nm1
    pt = total_units - pr - ang_q - ang_p

    out[s, 0] = trunk
    out[s, 1] = rootcomp
    out[s, 2] = pr
    out[s, 3] = pt
    out[s, 4] = psi[top]


@njit(cache=True, parallel=True)
def _tree_stats_loop(codes, roots, tops, labels, out):
    for s in prange(codes.shape[0]):
        _tree_stats_one(codes[s], roots[s], tops[s], labels[s], out, s)


def tree_stats_batch(codes, roots, tops, labels):
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    roots = np.ascontiguousarray(roots, dtype=np.int64)
    tops = np.ascontiguousarray(tops, dtype=np.int64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    B = codes.shape[0]
    out = np.empty((B, 5), dtype=np.int64)
    _tree_stats_loop(codes, roots, tops, labels, out)
    return out[:, 0], out[:, 1], out[:, 2], out[:, 3], out[:, 4]


# ---------------------------------------------------------------------------
# perfect matchings for trivalent map enumeration


@njit(cache=True)
def _matchings_dfs(sigma, alpha, paired, want_faces, want_genus, out, counter, fill):
    nd = sigma.shape[0]
    a = -1
    for i in range(nd):
        if not paired[i]:
            a = i
            break
    if a < 0:
        # complete involution: connectivity, faces, genus
        nv = nd // 3
        ne = nd // 2
        parent = np.empty(nv, dtype=np.int64)
        for i in range(nv):
            parent[i] = i
        for i in range(nd):
            j = alpha[i]
            if j > i:
                ru = i // 3
                while parent[ru] != ru:
                    ru = parent[ru]
                rv = j // 3
                while parent[rv] != rv:
                    rv = parent[rv]
                if ru != rv:
                    parent[rv] = ru
        ncomp = 0
        for i in range(nv):
            if parent[i] == i:
                ncomp += 1
        if ncomp != 1:
            return counter
        visited = np.zeros(nd, dtype=np.int64)
        faces = 0
        for start in range(nd):
            if visited[start]:
                continue
            faces += 1
            x = start
            while not visited[x]:
                visited[x] = 1
                x = sigma[alpha[x]]
        genus2 = 2 - nv + ne - faces  # = 2g
        if faces == want_faces and genus2 == 2 * want_genus:
            if fill:
                for i in range(nd):
                    out[counter, i] = alpha[i]
            counter += 1
        return counter
    for b in range(a + 1, nd):
        if paired[b]:
            continue
        alpha[a] = b
        alpha[b] = a
        paired[a] = True
        paired[b] = True
        counter = _matchings_dfs(sigma, alpha, paired, want_faces, want_genus, out, counter, fill)
        paired[a] = False
        paired[b] = False
    return counter


def trivalent_matchings(n_vertices, want_faces, want_genus):
    nd = 3 * n_vertices
    sigma = np.empty(nd, dtype=np.int64)
    for k in range(n_vertices):
        sigma[3 * k] = 3 * k + 1
        sigma[3 * k + 1] = 3 * k + 2
        sigma[3 * k + 2] = 3 * k
    alpha = np.full(nd, -1, dtype=np.int64)
    paired = np.zeros(nd, dtype=np.bool_)
    dummy = np.empty((1, nd), dtype=np.int64)
    cnt = _matchings_dfs(sigma, alpha, paired, want_faces, want_genus, dummy, 0, False)
    out = np.empty((cnt, nd), dtype=np.int64)
    if cnt:
        _matchings_dfs(sigma, alpha, paired, want_faces, want_genus, out, 0, True)
    return out
