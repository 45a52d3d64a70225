"""numpy backend: exact vectorized fallbacks, no jit.

The tuple counters run a transfer-matrix DP over (product permutation,
support partition) states instead of a pruned DFS; the result is the same
exact integer.  Tree statistics are computed step-synchronized across the
batch, so per-sample sequential structure (decode, boundary walk) becomes a
loop of whole-batch gathers.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

# ---------------------------------------------------------------------------
# transposition tuple counting

_STATE_CACHE: dict = {}


def _cycle_type(p: tuple) -> tuple:
    seen = [False] * len(p)
    lens = []
    for s in range(len(p)):
        if seen[s]:
            continue
        ln = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = p[x]
            ln += 1
        lens.append(ln)
    return tuple(sorted(lens, reverse=True))


def _states(d: int, track_partition: bool):
    key = (d, track_partition)
    if key in _STATE_CACHE:
        return _STATE_CACHE[key]
    trans = list(combinations(range(d), 2))
    ident = tuple(range(d))
    start = (ident, ident if track_partition else None)
    index = {start: 0}
    states = [start]
    rows = []
    i = 0
    while i < len(states):
        p, part = states[i]
        row = []
        for a, b in trans:
            q = list(p)
            q[a], q[b] = q[b], q[a]
            q = tuple(q)
            if track_partition:
                pa, pb = part[a], part[b]
                if pa == pb:
                    newpart = part
                else:
                    lo = min(pa, pb)
                    newpart = tuple(lo if x in (pa, pb) else x for x in part)
            else:
                newpart = None
            st = (q, newpart)
            j = index.get(st)
            if j is None:
                j = len(states)
                index[st] = j
                states.append(st)
            row.append(j)
        rows.append(row)
        i += 1
    tab = np.array(rows, dtype=np.int64).T.copy()  # (T, S)
    types = [_cycle_type(p) for p, _ in states]
    if track_partition:
        full = np.array([len(set(part)) == 1 for _, part in states])
    else:
        full = np.ones(len(states), dtype=bool)
    perms = [p for p, _ in states]
    data = {"tab": tab, "types": types, "full": full, "perms": perms}
    _STATE_CACHE[key] = data
    return data


def _run_dp(d: int, r: int, track_partition: bool) -> tuple[np.ndarray, dict]:
    ntrans = d * (d - 1) // 2
    if ntrans**r >= 2**62:
        raise OverflowError("tuple count may overflow int64; lower r")
    data = _states(d, track_partition)
    tab = data["tab"]
    v = np.zeros(tab.shape[1], dtype=np.int64)
    v[0] = 1
    for _ in range(r):
        v2 = np.zeros_like(v)
        for t in range(tab.shape[0]):
            np.add.at(v2, tab[t], v)
        v = v2
    return v, data


def count_tuples_class(d, r, target_type, transitive):
    if d == 1:
        return 1 if (r == 0 and target_type == (1,)) else 0
    if r == 0:
        return 1 if target_type == (1,) * d and not transitive else 0
    v, data = _run_dp(d, r, transitive)
    total = 0
    for i, tp in enumerate(data["types"]):
        if tp == target_type and data["full"][i]:
            total += int(v[i])
    return total


def count_tuples_fixed(d, r, target_perm, transitive):
    if d == 1:
        return 1 if r == 0 else 0
    if r == 0:
        ident = all(target_perm[i] == i for i in range(d))
        return 1 if ident and not transitive else 0
    v, data = _run_dp(d, r, transitive)
    total = 0
    for i, p in enumerate(data["perms"]):
        if p == target_perm and data["full"][i]:
            total += int(v[i])
    return total


# ---------------------------------------------------------------------------
# edge-tree decoding and statistics


def decode_pruefer_batch(codes):
    codes = np.asarray(codes, dtype=np.int64)
    B, nm2 = codes.shape
    n = nm2 + 2
    ar = np.arange(B)
    degree = np.ones((B, n), dtype=np.int64)
    np.add.at(degree, (np.repeat(ar, nm2), codes.ravel()), 1)
    eu = np.empty((B, n - 1), dtype=np.int64)
    ev = np.empty((B, n - 1), dtype=np.int64)
    ptr = np.argmax(degree == 1, axis=1)
    leaf = ptr.copy()
    for i in range(nm2):
        v = codes[:, i]
        eu[:, i] = leaf
        ev[:, i] = v
        degree[ar, v] -= 1
        cond = (degree[ar, v] == 1) & (v < ptr)
        adv = ~cond
        if adv.any():
            ptr_adv = ptr + adv
            while True:
                bad = adv & (degree[ar, np.minimum(ptr_adv, n - 1)] != 1)
                if not bad.any():
                    break
                ptr_adv = ptr_adv + bad
            ptr = np.where(adv, ptr_adv, ptr)
        leaf = np.where(cond, v, ptr)
    eu[:, nm2] = leaf
    ev[:, nm2] = n - 1
    return np.stack([eu, ev], axis=2)


def tree_stats_batch(codes, roots, tops, labels):
    codes = np.asarray(codes, dtype=np.int64)
    roots = np.asarray(roots, dtype=np.int64)
    tops = np.asarray(tops, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    B, nm2 = codes.shape
    n = nm2 + 2
    ne = n - 1
    m = 2 * ne
    ar = np.arange(B)

    edges = decode_pruefer_batch(codes)
    eu, ev = edges[:, :, 0], edges[:, :, 1]

    # label-sorted incidence per sample: sort darts by (sample, vertex, label)
    vert = np.concatenate([eu, ev], axis=1)
    other = np.concatenate([ev, eu], axis=1)
    eids = np.broadcast_to(np.arange(ne), (B, ne))
    eid2 = np.concatenate([eids, eids], axis=1)
    lab2 = np.concatenate([labels, labels], axis=1)
    samp = np.repeat(ar, m)
    order = np.lexsort((lab2.ravel(), vert.ravel(), samp))
    slot_vertex = vert.ravel()[order].reshape(B, m)
    slot_other = other.ravel()[order].reshape(B, m)
    slot_edge = eid2.ravel()[order].reshape(B, m)
    rank = np.empty(B * m, dtype=np.int64)
    rank[order] = np.arange(B * m)
    rank = rank.reshape(B, m) - (ar * m)[:, None]
    eslot_u = rank[:, :ne]
    eslot_v = rank[:, ne:]

    deg = np.zeros((B, n), dtype=np.int64)
    np.add.at(deg, (samp, vert.ravel()), 1)
    offs = np.zeros((B, n + 1), dtype=np.int64)
    np.cumsum(deg, axis=1, out=offs[:, 1:])

    # successor dart after arriving along each dart
    e_of_slot = slot_edge
    w_of_slot = slot_other
    at_u = eu[ar[:, None], e_of_slot] == w_of_slot
    slot_w = np.where(at_u, eslot_u[ar[:, None], e_of_slot], eslot_v[ar[:, None], e_of_slot])
    nxt = slot_w + 1
    wrap = nxt == offs[ar[:, None], w_of_slot + 1]
    nxt = np.where(wrap, offs[ar[:, None], w_of_slot], nxt)

    # boundary walk, step-synchronized across the batch
    walk_edge = np.empty((B, m), dtype=np.int64)
    walk_head = np.empty((B, m), dtype=np.int64)
    walk_tail = np.empty((B, m), dtype=np.int64)
    cur = offs[ar, roots]
    for step in range(m):
        walk_edge[:, step] = slot_edge[ar, cur]
        walk_head[:, step] = slot_other[ar, cur]
        walk_tail[:, step] = slot_vertex[ar, cur]
        cur = nxt[ar, cur]

    steps = np.broadcast_to(np.arange(m), (B, m))
    pos1 = np.full((B, ne), m, dtype=np.int64)
    pos2 = np.full((B, ne), -1, dtype=np.int64)
    np.minimum.at(pos1, (np.repeat(ar, m), walk_edge.ravel()), steps.ravel())
    np.maximum.at(pos2, (np.repeat(ar, m), walk_edge.ravel()), steps.ravel())

    firstpos = np.full((B, n), m, dtype=np.int64)
    np.minimum.at(firstpos, (np.repeat(ar, m), walk_head.ravel()), steps.ravel())
    firstpos[ar, roots] = -1

    psivt = 1 + np.sum(firstpos < firstpos[ar, tops][:, None], axis=1)

    parent = np.full((B, n), -1, dtype=np.int64)
    parent_edge = np.full((B, n), -1, dtype=np.int64)
    valid = firstpos < m
    fp = np.where(valid, firstpos, 0)
    parent_all = walk_tail[ar[:, None], fp]
    pedge_all = walk_edge[ar[:, None], fp]
    parent[valid] = parent_all[valid]
    parent_edge[valid] = pedge_all[valid]
    parent[ar, roots] = roots

    # chase parents from the top to the root: trunk length and the root child
    cur = tops.copy()
    c1 = tops.copy()
    depth_top = np.zeros(B, dtype=np.int64)
    while True:
        active = cur != roots
        if not active.any():
            break
        nxtv = np.where(active, parent[ar, cur], cur)
        hits = active & (nxtv == roots)
        c1[hits] = cur[hits]
        depth_top += active
        cur = nxtv
    trunk = depth_top + 1
    e_t = parent_edge[ar, tops]
    e_r = parent_edge[ar, c1]
    rootcomp = n - (pos2[ar, e_r] - pos1[ar, e_r] + 1) // 2

    # angle slots in units of 1/(n-1)
    labs_along = labels[ar[:, None], walk_edge]
    ang = (np.roll(labs_along, -1, axis=1) - labs_along) % ne
    ang[ang == 0] = ne
    prefix = np.cumsum(ang, axis=1)  # prefix[:, k] = sum of slots 0..k

    q2 = pos2[ar, e_r]
    p_end = pos1[ar, e_t]

    def slot_sum(a, b):
        # sum of ang[:, j] for j in the cyclic range [a, b), rowwise
        total = prefix[:, -1]
        sa = np.where(a > 0, prefix[ar, a - 1], 0)
        sb = np.where(b > 0, prefix[ar, b - 1], 0)
        lin = sb - sa
        return np.where(a <= b, lin, total + lin)

    pr = slot_sum((q2 + 1) % m, p_end)
    # empty arc wraps to the full sum through the formula; fix it explicitly
    pr = np.where((q2 + 1) % m == p_end, 0, pr)
    ang_q = ang[ar, q2]
    ang_p = ang[ar, p_end]
    pt = n * ne - pr - ang_q - ang_p

    return trunk, rootcomp, pr, pt, psivt


# ---------------------------------------------------------------------------
# perfect matchings for trivalent map enumeration


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def trivalent_matchings(n_vertices, want_faces, want_genus):
    nd = 3 * n_vertices
    ne = nd // 2
    sigma = np.arange(nd)
    sigma = sigma - sigma % 3 + (sigma + 1) % 3
    total = _double_factorial(nd - 1)
    radices = [nd - 2 * j - 1 for j in range(ne)]
    batch = 1 << 17
    keep_rows = []
    for start in range(0, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        b = idx.shape[0]
        br = np.arange(b)
        rem = idx.copy()
        digits = np.empty((b, ne), dtype=np.int64)
        for k in range(ne):
            rest = 1
            for rr in radices[k + 1 :]:
                rest *= rr
            digits[:, k] = rem // rest
            rem = rem % rest
        free = np.ones((b, nd), dtype=bool)
        alpha = np.empty((b, nd), dtype=np.int64)
        for k in range(ne):
            a = np.argmax(free, axis=1)
            free[br, a] = False
            cum = np.cumsum(free, axis=1)
            partner = np.argmax(cum == (digits[:, k] + 1)[:, None], axis=1)
            free[br, partner] = False
            alpha[br, a] = partner
            alpha[br, partner] = a
        # face count: cycles of sigma o alpha via min-label propagation
        f = sigma[alpha]
        labm = np.broadcast_to(np.arange(nd), (b, nd)).copy()
        hop = f.copy()
        rounds = 1
        while (1 << rounds) < nd:
            rounds += 1
        for _ in range(rounds + 1):
            labm = np.minimum(labm, labm[br[:, None], hop])
            hop = hop[br[:, None], hop]
        faces = np.sum(labm == np.arange(nd), axis=1)
        # connectivity of the vertex graph
        nv = n_vertices
        reach = np.zeros((b, nv, nv), dtype=bool)
        reach[:, np.arange(nv), np.arange(nv)] = True
        for i in range(nd):
            reach[br, i // 3, alpha[:, i] // 3] = True
        for _ in range(4):
            r8 = reach.astype(np.uint8)
            reach = (np.matmul(r8, r8) > 0) | reach
        connected = reach[:, 0, :].all(axis=1)
        genus2 = 2 - nv + ne - faces
        keep = connected & (faces == want_faces) & (genus2 == 2 * want_genus)
        if keep.any():
            keep_rows.append(alpha[keep])
    if keep_rows:
        return np.concatenate(keep_rows, axis=0)
    return np.empty((0, nd), dtype=np.int64)
