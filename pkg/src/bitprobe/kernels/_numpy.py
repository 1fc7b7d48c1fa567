"""Vectorised pure-numpy kernels, used when numba is disabled."""
from itertools import combinations, islice

import numpy as np

_CHUNK = 1 << 16


def _weights(t):
    return np.int64(1) << np.arange(t - 1, -1, -1, dtype=np.int64)


def scan_memories(locs, table_bits, want, nbits):
    k, t = locs.shape
    shifts = (nbits - 1 - locs).astype(np.int64)
    w = _weights(t)
    total = 1 << nbits
    for start in range(0, total, _CHUNK):
        mem = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = (mem[:, None, None] >> shifts[None]) & 1
        ans = table_bits[(bits * w).sum(-1)]
        hit = np.flatnonzero((ans == want).all(axis=1))
        if hit.size:
            return int(mem[hit[0]])
    return -1


def valid_maps(maps, table_bits, nbits, needed):
    n_maps, m, t = maps.shape
    mem = np.arange(1 << nbits, dtype=np.int64)
    w = _weights(t)
    umask = np.int64(1) << np.arange(m, dtype=np.int64)
    out = np.zeros(n_maps, dtype=bool)
    step = max(1, _CHUNK // max(1, mem.size * m))
    for start in range(0, n_maps, step):
        block = maps[start:start + step].astype(np.int64)
        shifts = nbits - 1 - block                            # (B, m, t)
        bits = (mem[None, :, None, None] >> shifts[:, None]) & 1  # (B, M, m, t)
        ans = table_bits[(bits * w).sum(-1)].astype(np.int64)  # (B, M, m)
        masks = (ans * umask).sum(-1)                          # (B, M)
        hit = (masks[:, :, None] == needed[None, None, :]).any(axis=1)
        out[start:start + step] = hit.all(axis=1)
    return out


def expansion_violation(nbr, n_locs, r_min, r_max, num, den):
    m, t = nbr.shape
    for r in range(r_min, r_max + 1):
        it = combinations(range(m), r)
        while True:
            chunk = np.array(list(islice(it, _CHUNK)), dtype=np.int64)
            if chunk.size == 0:
                break
            locs = np.sort(nbr[chunk].reshape(len(chunk), r * t), axis=1)
            distinct = 1 + (np.diff(locs, axis=1) != 0).sum(axis=1)
            bad = np.flatnonzero(den * distinct < num * r)
            if bad.size:
                return chunk[bad[0]].copy()
    return np.empty(0, dtype=np.int64)


def query_nonadaptive(bits, nbr, table_bits):
    idx = (bits[nbr].astype(np.int64) * _weights(nbr.shape[1])).sum(axis=1)
    return table_bits[idx].astype(np.uint8)


def query_adaptive(bits, g1, g2, offset, s, t2):
    m = g1.shape[0]
    ok = bits[g1].all(axis=1) if g1.shape[1] else np.ones(m, dtype=bool)
    rows = np.arange(m)
    node = np.zeros(m, dtype=np.int64)
    bit = np.zeros(m, dtype=np.int64)
    for _ in range(t2):
        bit = bits[offset + node * s + g2[rows, node]].astype(np.int64)
        node = 2 * node + 1 + bit
    return (ok & (bit == 1)).astype(np.uint8)
