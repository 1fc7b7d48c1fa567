"""Compiled kernels. Signatures mirror ``_numpy``; results must be identical."""
import numpy as np
from numba import njit


@njit(cache=True)
def _probe_index(mem, locs_row, nbits):
    idx = 0
    for j in range(locs_row.shape[0]):
        idx = (idx << 1) | ((mem >> (nbits - 1 - locs_row[j])) & 1)
    return idx


@njit(cache=True)
def scan_memories(locs, table_bits, want, nbits):
    k = locs.shape[0]
    total = np.int64(1) << nbits
    for mem in range(total):
        ok = True
        for i in range(k):
            if table_bits[_probe_index(mem, locs[i], nbits)] != want[i]:
                ok = False
                break
        if ok:
            return mem
    return -1


@njit(cache=True)
def valid_maps(maps, table_bits, nbits, needed):
    n_maps, m = maps.shape[0], maps.shape[1]
    out = np.zeros(n_maps, dtype=np.bool_)
    seen = np.zeros(np.int64(1) << m, dtype=np.bool_)
    total = np.int64(1) << nbits
    for k in range(n_maps):
        seen[:] = False
        for mem in range(total):
            ans = 0
            for u in range(m):
                if table_bits[_probe_index(mem, maps[k, u], nbits)]:
                    ans |= np.int64(1) << u
            seen[ans] = True
        good = True
        for q in range(needed.shape[0]):
            if not seen[needed[q]]:
                good = False
                break
        out[k] = good
    return out


@njit(cache=True)
def expansion_violation(nbr, n_locs, r_min, r_max, num, den):
    m, t = nbr.shape
    stamp = np.full(n_locs, -1, dtype=np.int64)
    tick = 0
    for r in range(r_min, r_max + 1):
        idx = np.arange(r)
        while True:
            tick += 1
            distinct = 0
            for a in range(r):
                for j in range(t):
                    loc = nbr[idx[a], j]
                    if stamp[loc] != tick:
                        stamp[loc] = tick
                        distinct += 1
            if den * distinct < num * r:
                return idx.copy()
            i = r - 1
            while i >= 0 and idx[i] == m - r + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, r):
                idx[j] = idx[j - 1] + 1
    return np.empty(0, dtype=np.int64)


@njit(cache=True)
def query_nonadaptive(bits, nbr, table_bits):
    m, t = nbr.shape
    out = np.zeros(m, dtype=np.uint8)
    for u in range(m):
        idx = 0
        for j in range(t):
            idx = (idx << 1) | bits[nbr[u, j]]
        out[u] = table_bits[idx]
    return out


@njit(cache=True)
def query_adaptive(bits, g1, g2, offset, s, t2):
    m = g1.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    for u in range(m):
        ok = 1
        for j in range(g1.shape[1]):
            if bits[g1[u, j]] == 0:
                ok = 0
                break
        node = 0
        bit = 0
        for level in range(t2):
            bit = bits[offset + node * s + g2[u, node]]
            node = 2 * node + 1 + bit
        out[u] = ok & bit
    return out
