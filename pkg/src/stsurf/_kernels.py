"""Compiled search kernels for the census.

For a fixed right-neighbour permutation ``h`` the search assigns ``v`` square by
square. A *break* is a square ``y`` with ``v(h^-1 y) != h^-1 v(y)``; the number
of breaks equals the number of squares moved by the commutator, so partial
assignments with too many breaks are pruned.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def canonical_encoding(h, v, n, out):
    """Write the least BFS relabelling of ``(h, v)`` into ``out``; False if not transitive."""
    best = np.full(2 * n, 1 << 30, np.int64)
    lab = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    cur = np.empty(2 * n, np.int64)
    hinv = np.empty(n, np.int64)
    vinv = np.empty(n, np.int64)
    for i in range(n):
        hinv[h[i]] = i
        vinv[v[i]] = i
    for s in range(n):
        lab[:] = -1
        lab[s] = 0
        order[0] = s
        cnt = 1
        head = 0
        while head < cnt:
            x = order[head]
            head += 1
            for k in range(4):
                if k == 0:
                    y = h[x]
                elif k == 1:
                    y = v[x]
                elif k == 2:
                    y = hinv[x]
                else:
                    y = vinv[x]
                if lab[y] < 0:
                    lab[y] = cnt
                    order[cnt] = y
                    cnt += 1
        if cnt < n:
            return False
        for j in range(n):
            x = order[j]
            cur[j] = lab[h[x]]
            cur[n + j] = lab[v[x]]
        for j in range(2 * n):
            if cur[j] != best[j]:
                if cur[j] < best[j]:
                    best[:] = cur
                break
    for j in range(2 * n):
        out[j] = best[j]
    return True


@njit(cache=True)
def _commutator_ok(h, hinv, v, n, moved):
    vinv = np.empty(n, np.int64)
    for i in range(n):
        vinv[v[i]] = i
    c = np.empty(n, np.int64)
    for x in range(n):
        c[x] = h[v[hinv[vinv[x]]]]
    for x in range(n):
        if c[x] != x:
            # three moved squares form a 3-cycle; four must form two 2-cycles
            if moved == 4 and c[c[x]] != x:
                return False
            if moved == 3 and c[c[c[x]]] != x:
                return False
    return True


@njit(cache=True)
def search(h, moved, n):
    """Canonical encodings of all transitive ``(h, v)`` whose commutator moves ``moved`` squares.

    ``moved`` is 3 (one 3-cycle) or 4 (two 2-cycles). Rows may repeat.
    """
    hinv = np.empty(n, np.int64)
    for i in range(n):
        hinv[h[i]] = i
    v = np.full(n, -1, np.int64)
    used = np.zeros(n, np.bool_)
    cand = np.zeros(n + 1, np.int64)
    brk = np.zeros(n + 1, np.int64)
    cap = 1024
    keys = np.empty((cap, 2 * n), np.uint8)
    nk = 0
    key = np.empty(2 * n, np.uint8)
    depth = 0
    while depth >= 0:
        if depth == n:
            if brk[n] == moved and _commutator_ok(h, hinv, v, n, moved):
                if canonical_encoding(h, v, n, key):
                    if nk == cap:
                        grown = np.empty((2 * cap, 2 * n), np.uint8)
                        grown[:cap] = keys
                        keys = grown
                        cap *= 2
                    keys[nk] = key
                    nk += 1
            depth -= 1
            used[v[depth]] = False
            v[depth] = -1
            continue
        y = depth
        t = cand[y]
        while t < n and used[t]:
            t += 1
        if t >= n:
            depth -= 1
            if depth >= 0:
                used[v[depth]] = False
                v[depth] = -1
            continue
        cand[y] = t + 1
        v[y] = t
        used[t] = True
        b = brk[y]
        a = hinv[y]
        if v[a] >= 0 and v[a] != hinv[t]:
            b += 1
        a = h[y]
        if a != y and v[a] >= 0 and v[y] != hinv[v[a]]:
            b += 1
        if b > moved:
            used[t] = False
            v[y] = -1
            continue
        brk[y + 1] = b
        depth += 1
        cand[depth] = 0
    return keys[:nk]
