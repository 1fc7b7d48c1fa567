"""Storage schemes: encoders, query algorithms and exhaustive verification.

A scheme stores any set ``S`` of at most ``n`` elements from ``[0, m)`` in a
bit memory so that membership of each ``u`` is answered by reading ``t``
bits. Query functions on ``t`` bits are truth tables of ``2**t`` bits whose
index has the first probe as its most significant bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from . import kernels
from .config import Budget, resolve
from .errors import (AdmissibilityViolated, BudgetExceeded, MatchingInfeasible,
                     RetriesExhausted, SetTooLarge)
from .probegraph import (AdaptiveProbeGraph, NonAdaptiveProbeGraph, build_random_adaptive,
                         build_random_nonadaptive, check_expansion, hall_disjoint_representatives,
                         heavy_overlaps, survivors, survivors_plus)


# ------------------------------------------------------------ query tables

def table_bits(table: int, t: int) -> np.ndarray:
    return np.array([(table >> i) & 1 for i in range(1 << t)], dtype=np.uint8)


def majority_table(t: int) -> int:
    if t < 1 or t % 2 == 0:
        raise ValueError("majority needs an odd number of probes")
    return sum(1 << i for i in range(1 << t) if bin(i).count("1") > t // 2)


def and_table(t: int) -> int:
    return 1 << ((1 << t) - 1)


def table_hex(table: int, t: int) -> str:
    width = max(1, (1 << t) // 4)
    return f"{table:0{width}X}"


# ------------------------------------------------------------------ memory

@dataclass(frozen=True, eq=False)
class Memory:
    bits: np.ndarray
    layout: tuple[tuple[str, int, int], ...] = ()  # (name, offset, length)

    def __post_init__(self):
        b = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if b.ndim != 1 or (b.size and b.max() > 1):
            raise ValueError("memory must be a flat 0/1 vector")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other):
        return isinstance(other, Memory) and np.array_equal(self.bits, other.bits)

    __hash__ = None


def _check_set(S: Iterable[int], m: int, n: int) -> frozenset[int]:
    S = frozenset(int(u) for u in S)
    if any(u < 0 or u >= m for u in S):
        raise ValueError(f"element out of range [0, {m})")
    if len(S) > n:
        raise SetTooLarge(f"|S| = {len(S)} exceeds n = {n}")
    return S


@dataclass(frozen=True)
class AdmissibilityReport:
    r_max: int
    factor: Fraction
    overlap_bound: int | None = None        # cap on |T_S| (non-adaptive)
    survivor_bound: Fraction | None = None  # cap on |surv(S)| (adaptive)
    max_overlap: int | None = None
    max_survivors: int | None = None
    max_survivors_plus: int | None = None
    seed: int | None = None
    retries: int | None = None


# ---------------------------------------------------------- non-adaptive

@dataclass(frozen=True, eq=False)
class NonAdaptiveScheme:
    m: int
    n: int
    graph: NonAdaptiveProbeGraph
    query_table: int
    report: AdmissibilityReport | None = None
    kind: str = "nonadaptive"

    @property
    def t(self) -> int:
        return self.graph.t

    @property
    def s(self) -> int:
        return self.graph.s

    @property
    def memory_length(self) -> int:
        return self.graph.num_locations

    def layout(self):
        return tuple((f"block{i}", i * self.s, self.s) for i in range(self.t))

    def encode(self, S: Iterable[int]) -> Memory:
        return encode_nonadaptive(self, S)

    def query(self, mem: Memory, u: int) -> int:
        return query_nonadaptive(self, mem, u)

    def query_all(self, mem: Memory) -> np.ndarray:
        return kernels.query_nonadaptive(kernels.as_bits(mem.bits),
                                         kernels.as_locs(self.graph.global_neighbors()),
                                         table_bits(self.query_table, self.t))


def pad_set(S: Iterable[int], m: int, n: int) -> list[int]:
    """``S`` extended to ``n`` elements with the largest-index non-members."""
    S = set(S)
    extra = [u for u in range(m - 1, -1, -1) if u not in S][: max(0, n - len(S))]
    return sorted(S | set(extra))


def encode_nonadaptive(sch: NonAdaptiveScheme, S: Iterable[int]) -> Memory:
    S = _check_set(S, sch.m, sch.n)
    t = sch.t
    if sch.query_table != majority_table(t):
        raise ValueError("the generic encoder needs the majority query")
    need = (t + 1) // 2
    padded = pad_set(S, sch.m, sch.n)
    heavy = heavy_overlaps(sch.graph, padded, need)
    if sch.report is not None and sch.report.overlap_bound is not None \
            and len(heavy) > sch.report.overlap_bound:
        raise AdmissibilityViolated(f"|T_S| = {len(heavy)} exceeds verified bound")
    gl = sch.graph.global_neighbors()
    slots = hall_disjoint_representatives({u: gl[u].tolist() for u in sorted(set(padded) | heavy)}, need)
    bits = np.zeros(sch.memory_length, dtype=np.uint8)
    for u in S:
        bits[sorted(slots[u])] = 1
    return Memory(bits, sch.layout())


def query_nonadaptive(sch: NonAdaptiveScheme, mem: Memory, u: int) -> int:
    locs = sch.graph.global_neighbors()[u]
    idx = 0
    for loc in locs:
        idx = (idx << 1) | int(mem.bits[loc])
    return (sch.query_table >> idx) & 1


def admissibility_bounds(m: int, n: int) -> tuple[int, int]:
    """(r_max, overlap bound) for the non-adaptive expansion conditions."""
    extra = math.ceil(2 * n * math.log2(2 * m / n))
    return min(m, n + extra), extra


def check_nonadaptive_admissible(g: NonAdaptiveProbeGraph, n: int,
                                 budget: Budget | None = None) -> AdmissibilityReport | None:
    """Exact check of both expansion conditions; None when either fails."""
    budget = resolve(budget)
    t = g.t
    factor = Fraction(t + 1, 2)
    r_max, bound = admissibility_bounds(g.m, n)
    if check_expansion(g, r_max, factor, budget) is not None:
        return None
    if math.comb(g.m, n) > budget.subsets:
        raise BudgetExceeded(f"overlap check needs {math.comb(g.m, n)} sets")
    worst = 0
    for S in combinations(range(g.m), n):
        size = len(heavy_overlaps(g, S, (t + 1) // 2))
        if size > bound:
            return None
        worst = max(worst, size)
    return AdmissibilityReport(r_max, factor, overlap_bound=bound, max_overlap=worst)


def default_block_size(m: int, n: int, t: int) -> int:
    """Block size with the asymptotic shape of the construction, constant 1."""
    e = 2 / (t - 1) if t > 1 else 1.0
    return max(1, math.ceil(m ** e * n ** (1 - e) * math.log2(2 * m / n)))


def build_nonadaptive_scheme(m: int, n: int, t: int, s: int | None = None, seed: int = 0,
                             max_retries: int = 1000,
                             budget: Budget | None = None) -> NonAdaptiveScheme:
    """Generate random graphs until one passes the exact admissibility check."""
    if t % 2 == 0:
        raise ValueError("t must be odd")
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    s = s or default_block_size(m, n, t)
    for attempt in range(max_retries):
        g = build_random_nonadaptive(m, s, t, seed=(seed, attempt))
        rep = check_nonadaptive_admissible(g, n, budget)
        if rep is not None:
            return NonAdaptiveScheme(m, n, g, majority_table(t),
                                     replace(rep, seed=seed, retries=attempt))
    raise RetriesExhausted(f"no admissible graph in {max_retries} attempts (seed {seed})")


def characteristic_scheme(m: int) -> NonAdaptiveScheme:
    """One bit per element."""
    g = NonAdaptiveProbeGraph(m, 1, m, np.arange(m).reshape(m, 1))
    return NonAdaptiveScheme(m, m, g, majority_table(1), kind="characteristic")


# -------------------------------------------------------------------- grid

@dataclass(frozen=True, eq=False)
class GridScheme(NonAdaptiveScheme):
    kind: str = "grid"

    def encode(self, S: Iterable[int]) -> Memory:
        return encode_grid(self, S)


def grid_scheme_n1(m: int) -> GridScheme:
    """Rows in one block, columns in the other, AND of the two bits."""
    g = math.isqrt(m - 1) + 1 if m > 1 else 1
    u = np.arange(m)
    graph = NonAdaptiveProbeGraph(m, 2, g, np.stack([u // g, u % g], axis=1))
    return GridScheme(m, 1, graph, and_table(2))


def encode_grid(sch: GridScheme, S: Iterable[int]) -> Memory:
    S = _check_set(S, sch.m, 1)
    bits = np.zeros(sch.memory_length, dtype=np.uint8)
    for u in S:
        bits[sch.graph.global_neighbors()[u]] = 1
    return Memory(bits, sch.layout())


# ---------------------------------------------------------------- adaptive

def force_tree_output(depth: int, controlled: Iterable[int], b: int) -> dict[int, int]:
    """Values on controlled tree nodes that make every walk output ``b``.

    Nodes are heap indices of a complete binary tree with ``depth`` levels.
    At a controlled node the walk is steered into the child subtree with
    fewer uncontrolled nodes; at an uncontrolled node both subtrees are
    forced. Succeeds whenever at most ``depth - 1`` nodes are uncontrolled.
    Only nodes the forcing actually relies on are assigned.
    """
    total = (1 << depth) - 1
    controlled = set(controlled)
    if any(not 0 <= k < total for k in controlled):
        raise ValueError("node index outside the tree")
    if total - len(controlled) > depth - 1:
        raise ValueError(f"{total - len(controlled)} uncontrolled nodes; at most {depth - 1} allowed")
    first_leaf = (1 << (depth - 1)) - 1

    def free_in(k: int) -> int:
        if k >= total:
            return 0
        return (k not in controlled) + free_in(2 * k + 1) + free_in(2 * k + 2)

    out: dict[int, int] = {}

    def force(k: int) -> bool:
        if k >= first_leaf:
            if k in controlled:
                out[k] = b
                return True
            return False
        kids = (2 * k + 1, 2 * k + 2)
        if k not in controlled:
            return force(kids[0]) and force(kids[1])
        order = sorted((0, 1), key=lambda c: free_in(kids[c]))
        for c in order:
            snapshot = dict(out)
            if force(kids[c]):
                out[k] = c
                return True
            out.clear()
            out.update(snapshot)
        return False

    if not force(0):
        raise AssertionError("forcing failed despite the precondition")
    return out


def tree_output(depth: int, values: dict[int, int]) -> int:
    """Last bit read by the walk; missing nodes read as 0."""
    node, bit = 0, 0
    for _ in range(depth):
        bit = values.get(node, 0)
        node = 2 * node + 1 + bit
    return bit


def split_depth(t: int) -> tuple[int, int]:
    """(non-adaptive probes, adaptive depth) for a total of ``t`` probes."""
    if t < 3 or t % 2 == 0:
        raise ValueError("the adaptive recipe needs odd t >= 3")
    return (t - 3) // 2, (t + 3) // 2


@dataclass(frozen=True, eq=False)
class AdaptiveScheme:
    """Exactly-``n`` adaptive scheme: an AND over ``t1`` non-adaptive bits and
    an adaptive walk of depth ``t2``."""

    m: int
    n: int
    g1: NonAdaptiveProbeGraph
    g2: AdaptiveProbeGraph
    report: AdmissibilityReport | None = None
    kind: str = "adaptive"

    @property
    def t1(self) -> int:
        return self.g1.t

    @property
    def t2(self) -> int:
        return self.g2.t

    @property
    def s(self) -> int:
        return self.g2.s

    @property
    def alpha(self) -> int:
        return (1 << self.t2) - 1

    @property
    def beta(self) -> int:
        return (1 << self.t2) - self.t2

    @property
    def memory_length(self) -> int:
        return self.g1.num_locations + self.g2.num_locations

    def layout(self):
        return (("g1", 0, self.g1.num_locations),
                ("g2", self.g1.num_locations, self.g2.num_locations))

    def encode(self, S: Iterable[int]) -> Memory:
        return encode_adaptive(self, S)

    def query(self, mem: Memory, u: int) -> int:
        return query_adaptive(self, mem, u)

    def query_all(self, mem: Memory) -> np.ndarray:
        return kernels.query_adaptive(kernels.as_bits(mem.bits),
                                      kernels.as_locs(self.g1.global_neighbors()),
                                      kernels.as_locs(self.g2.neighbor),
                                      self.g1.num_locations, self.s, self.t2)


def encode_adaptive(sch: AdaptiveScheme, S: Iterable[int]) -> Memory:
    S = _check_set(S, sch.m, sch.n)
    bits = np.zeros(sch.memory_length, dtype=np.uint8)
    if not S:
        return Memory(bits, sch.layout())
    if len(S) != sch.n:
        raise ValueError("adaptive encoder stores exactly n elements; use PaddedScheme")
    for loc in sch.g1.neighborhood(S):
        bits[loc] = 1
    plus = survivors_plus(sch.g1, sch.g2, S)
    if sch.report is not None and sch.report.max_survivors_plus is not None \
            and len(plus) > sch.report.max_survivors_plus:
        raise AdmissibilityViolated(f"|surv+| = {len(plus)} exceeds verified range")
    gl2 = sch.g2.global_neighbors()
    slots = hall_disjoint_representatives({u: gl2[u].tolist() for u in sorted(S | plus)}, sch.beta)
    off = sch.g1.num_locations
    for u, locs in slots.items():
        node_of = {int(gl2[u, k]): k for k in range(sch.alpha)}
        controlled = {node_of[loc] for loc in locs}
        for node, val in force_tree_output(sch.t2, controlled, int(u in S)).items():
            bits[off + node * sch.s + sch.g2.neighbor[u, node]] = val
    return Memory(bits, sch.layout())


def query_adaptive(sch: AdaptiveScheme, mem: Memory, u: int) -> int:
    for loc in sch.g1.global_neighbors()[u]:
        if not mem.bits[loc]:
            return 0
    off = sch.g1.num_locations
    node, bit = 0, 0
    for _ in range(sch.t2):
        bit = int(mem.bits[off + node * sch.s + sch.g2.neighbor[u, node]])
        node = 2 * node + 1 + bit
    return bit


def check_adaptive_admissible(g1: NonAdaptiveProbeGraph, g2: AdaptiveProbeGraph, n: int,
                              budget: Budget | None = None) -> AdmissibilityReport | None:
    """Exact check of the survivor bound and survivor expansion."""
    budget = resolve(budget)
    t2 = g2.t
    beta = (1 << t2) - t2
    s = g2.s
    surv_bound = 10 * g1.m * Fraction(n, s) ** g1.t
    if math.comb(g1.m, n) > budget.subsets:
        raise BudgetExceeded(f"survivor check needs {math.comb(g1.m, n)} sets")
    worst_s = worst_p = 0
    for S in combinations(range(g1.m), n):
        surv = survivors(g1, S)
        if len(surv) > surv_bound:
            return None
        plus = survivors_plus(g1, g2, S)
        if check_expansion(g2, len(S) + len(plus), beta, budget,
                           elements=sorted(set(S) | plus)) is not None:
            return None
        worst_s = max(worst_s, len(surv))
        worst_p = max(worst_p, len(plus))
    r_max = n + worst_p
    return AdmissibilityReport(r_max, Fraction(beta), survivor_bound=surv_bound,
                               max_survivors=worst_s, max_survivors_plus=worst_p)


@dataclass(frozen=True, eq=False)
class PaddedScheme:
    """Stores up to ``n`` elements of ``[0, m)`` with an exactly-``n`` inner
    scheme over ``m + n`` elements; the top ``n`` are padding."""

    m: int
    inner: AdaptiveScheme

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def kind(self) -> str:
        return self.inner.kind

    @property
    def memory_length(self) -> int:
        return self.inner.memory_length

    def layout(self):
        return self.inner.layout()

    def encode(self, S: Iterable[int]) -> Memory:
        S = _check_set(S, self.m, self.n)
        if not S:
            return self.inner.encode(S)
        pad = range(self.m, self.m + self.n - len(S))
        return self.inner.encode(set(S) | set(pad))

    def query(self, mem: Memory, u: int) -> int:
        if not 0 <= u < self.m:
            raise ValueError("element out of range")
        return self.inner.query(mem, u)

    def query_all(self, mem: Memory) -> np.ndarray:
        return self.inner.query_all(mem)[: self.m]


def default_adaptive_block_size(m: int, n: int, t: int) -> int:
    e = 2 / (t + 1)
    return max(2, math.ceil(m ** e * n ** (1 - e) * math.log2(max(2, m))))


def build_adaptive_scheme(m: int, n: int, t: int, s: int | None = None, seed: int = 0,
                          max_retries: int = 1000, budget: Budget | None = None) -> PaddedScheme:
    t1, t2 = split_depth(t)
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    s = s or default_adaptive_block_size(m, n, t)
    universe = m + n
    for attempt in range(max_retries):
        g1 = build_random_nonadaptive(universe, s, t1, seed=(seed, attempt, 1))
        g2 = build_random_adaptive(universe, s, t2, seed=(seed, attempt, 2))
        rep = check_adaptive_admissible(g1, g2, n, budget)
        if rep is not None:
            inner = AdaptiveScheme(universe, n, g1, g2, replace(rep, seed=seed, retries=attempt))
            return PaddedScheme(m, inner)
    raise RetriesExhausted(f"no admissible pair in {max_retries} attempts (seed {seed})")


# ------------------------------------------------------------ verification

@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    sets_checked: int
    failing_set: tuple[int, ...] | None = None
    failing_element: int | None = None
    reason: str = ""


def verify_scheme(sch, n_check: int | None = None, budget: Budget | None = None) -> VerifyReport:
    """Encode every set of size at most ``n_check`` and query every element."""
    budget = resolve(budget)
    n_check = sch.n if n_check is None else n_check
    total = sum(math.comb(sch.m, k) for k in range(n_check + 1))
    if total > budget.subsets:
        raise BudgetExceeded(f"verification needs {total} sets")
    checked = 0
    for k in range(n_check + 1):
        for S in combinations(range(sch.m), k):
            checked += 1
            try:
                mem = sch.encode(S)
            except (MatchingInfeasible, AdmissibilityViolated) as exc:
                return VerifyReport(False, checked, S, None, f"encode failed: {exc}")
            answers = sch.query_all(mem)
            want = np.zeros(sch.m, dtype=np.uint8)
            want[list(S)] = 1
            wrong = np.flatnonzero(answers != want)
            if wrong.size:
                u = int(wrong[0])
                return VerifyReport(False, checked, S, u, f"element {u} answered {answers[u]}")
    return VerifyReport(True, checked)
