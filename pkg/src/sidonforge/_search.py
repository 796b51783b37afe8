"""Numba kernel for maximum g-Sidon subsets by depth-first branch and bound.

Elements are added in increasing order.  Each depth keeps the list of later
candidates that are still individually compatible with the chosen prefix, so
``depth + len(candidates)`` is an admissible size bound.  Representation counts
are updated incrementally on insertion and undone on backtrack.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _fits(y, chosen, depth, cnt, mod, g, w_cross, w_self):
    for t in range(depth):
        s = y + chosen[t]
        if mod > 0:
            s %= mod
        if cnt[s] + w_cross > g:
            return False
    s = 2 * y
    if mod > 0:
        s %= mod
    return cnt[s] + w_self <= g


@njit(cache=True)
def _apply(x, chosen, depth, cnt, mod, w_cross, w_self, sign):
    for t in range(depth):
        s = x + chosen[t]
        if mod > 0:
            s %= mod
        cnt[s] += sign * w_cross
    s = 2 * x
    if mod > 0:
        s %= mod
    cnt[s] += sign * w_self


@njit(cache=True)
def max_gsidon(universe, forced, n_sums, mod, g, w_cross, w_self, lower, upper):
    """Largest subset of ``universe`` containing ``forced`` with capped counts.

    ``mod`` is 0 for integer sums; ``lower`` is a size already known achievable
    (search only for strictly larger), ``upper`` an admissible cap that stops
    the search once reached.  Returns (best_size, best_set); best_set is empty
    when nothing beats ``lower``.
    """
    m = universe.size
    cnt = np.zeros(n_sums, dtype=np.int64)
    chosen = np.empty(m + 1, dtype=np.int64)
    cand = np.empty((m + 2, m), dtype=np.int64)
    ncand = np.zeros(m + 2, dtype=np.int64)
    pos = np.zeros(m + 2, dtype=np.int64)
    best = lower
    best_set = np.empty(0, dtype=np.int64)

    if not _fits(forced, chosen, 0, cnt, mod, g, w_cross, w_self):
        return best, best_set
    _apply(forced, chosen, 0, cnt, mod, w_cross, w_self, 1)
    chosen[0] = forced
    depth = 1
    if depth > best:
        best = depth
        best_set = chosen[:1].copy()
    k = 0
    for i in range(m):
        y = universe[i]
        if y > forced and _fits(y, chosen, depth, cnt, mod, g, w_cross, w_self):
            cand[depth, k] = y
            k += 1
    ncand[depth] = k
    pos[depth] = 0

    while depth >= 1:
        if best >= upper:
            break
        if pos[depth] < ncand[depth] and depth + ncand[depth] - pos[depth] > best:
            x = cand[depth, pos[depth]]
            pos[depth] += 1
            _apply(x, chosen, depth, cnt, mod, w_cross, w_self, 1)
            chosen[depth] = x
            nd = depth + 1
            k = 0
            for i in range(pos[depth], ncand[depth]):
                y = cand[depth, i]
                if _fits(y, chosen, nd, cnt, mod, g, w_cross, w_self):
                    cand[nd, k] = y
                    k += 1
            ncand[nd] = k
            pos[nd] = 0
            depth = nd
            if depth > best:
                best = depth
                best_set = chosen[:depth].copy()
        else:
            depth -= 1
            if depth >= 1:
                _apply(chosen[depth], chosen, depth, cnt, mod, w_cross, w_self, -1)
    return best, best_set


@njit(cache=True)
def greedy_gsidon(order, n_sums, mod, g, w_cross, w_self, seed_set):
    """Scan ``order`` once, keeping each element that leaves counts <= g.

    ``seed_set`` is inserted first (it must itself satisfy the cap).
    """
    cnt = np.zeros(n_sums, dtype=np.int64)
    chosen = np.empty(order.size + seed_set.size, dtype=np.int64)
    depth = 0
    for x in seed_set:
        _apply(x, chosen, depth, cnt, mod, w_cross, w_self, 1)
        chosen[depth] = x
        depth += 1
    for x in order:
        dup = False
        for t in range(depth):
            if chosen[t] == x:
                dup = True
                break
        if dup:
            continue
        if _fits(x, chosen, depth, cnt, mod, g, w_cross, w_self):
            _apply(x, chosen, depth, cnt, mod, w_cross, w_self, 1)
            chosen[depth] = x
            depth += 1
    return np.sort(chosen[:depth])
