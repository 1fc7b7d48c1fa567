"""Exhaustive minimum-space search over explicit probe maps.

A probe map gives each element ``t`` locations (repeats allowed). Since
element order and location names do not matter, only one map per symmetry
orbit needs testing: tuples are listed in non-decreasing order and the
flattened location sequence must introduce labels in increasing order
(per array when arrays are separate). The lexicographically least member of
every orbit has both properties, so the pruning is complete.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .. import kernels
from ..config import Budget, resolve
from ..errors import BudgetExceeded
from ..schemes import table_bits
from .probemap import Layout, ProbeMap

_BATCH = 4096


@dataclass(frozen=True)
class SearchResult:
    s: int
    table: int
    probe_map: ProbeMap


def needed_masks(m: int, n: int) -> np.ndarray:
    masks = [sum(1 << u for u in S) for k in range(n + 1) for S in combinations(range(m), k)]
    return np.array(masks, dtype=np.int64)


def canonical_maps(m: int, s: int, t: int, layout: Layout):
    """Yield orbit representatives as lists of ``m`` tuples, in lex order.

    Maps not using ``s`` labels (in any array) are skipped: they already
    appeared at a smaller ``s``.
    """
    tuples = list(product(range(s), repeat=t))
    per_probe = layout is Layout.THREE_ARRAYS
    width = t if per_probe else 1

    def extend(tup, top):
        top = list(top)
        for j, lab in enumerate(tup):
            a = j if per_probe else 0
            if lab > top[a] + 1:
                return None
            top[a] = max(top[a], lab)
        return top

    out: list[tuple[int, ...]] = []

    def rec(start, top):
        if len(out) == m:
            if max(top) == s - 1:
                yield list(out)
            return
        for i in range(start, len(tuples)):
            tup = tuples[i]
            if not per_probe and tup[0] > top[0] + 1:
                break
            new = extend(tup, top)
            if new is None:
                continue
            out.append(tup)
            yield from rec(i, new)
            out.pop()

    yield from rec(0, [-1] * width)


def candidate_count(m: int, s: int, t: int) -> int:
    """Upper bound on maps before label pruning."""
    return math.comb(s ** t + m - 1, m)


def _first_valid(m, n, t, s, table, layout, budget, masks):
    nbits = s if layout is Layout.SINGLE_ARRAY else t * s
    if nbits > budget.bits:
        raise BudgetExceeded(f"{nbits} memory bits exceed the exhaustive limit")
    tb = table_bits(table, t)
    offsets = 0 if layout is Layout.SINGLE_ARRAY else s * np.arange(t, dtype=np.int64)
    batch: list = []
    examined = 0

    def flush():
        arr = np.array(batch, dtype=np.int64).reshape(len(batch), m, t)
        ok = kernels.valid_maps(kernels.as_locs(arr + offsets), tb, nbits, masks)
        hit = np.flatnonzero(ok)
        return arr[hit[0]] if hit.size else None

    for pmap in canonical_maps(m, s, t, layout):
        batch.append(pmap)
        examined += 1
        if examined > budget.subsets:
            raise BudgetExceeded(f"more than {budget.subsets} candidate maps at s={s}")
        if len(batch) == _BATCH:
            found = flush()
            if found is not None:
                return found
            batch.clear()
    if batch:
        return flush()
    return None


def min_space_search(m: int, n: int, t: int, table: int | None = None,
                     layout: Layout = Layout.SINGLE_ARRAY, s_max: int | None = None,
                     budget: Budget | None = None) -> SearchResult | None:
    """Smallest ``s`` admitting a valid scheme, with its lex-first map.

    ``table=None`` minimises over every query function on ``t`` bits as
    well (returning the first table that attains the minimum). With
    ``THREE_ARRAYS`` ``s`` is the size of each array. Returns None if no
    ``s <= s_max`` works (``s_max`` defaults to ``m``, where the
    characteristic layout suffices for non-degenerate functions).
    """
    if m < 1 or n < 0 or t < 1:
        raise ValueError("need m >= 1, n >= 0, t >= 1")
    if m > 20:
        raise ValueError("exhaustive search is limited to m <= 20")
    budget = resolve(budget)
    s_max = m if s_max is None else s_max
    tables = range(1 << (1 << t)) if table is None else [table]
    masks = needed_masks(m, min(n, m))
    for s in range(1, s_max + 1):
        for tab in tables:
            found = _first_valid(m, n, t, s, tab, layout, budget, masks)
            if found is not None:
                return SearchResult(s, tab, ProbeMap(m, s, found, layout))
    return None
