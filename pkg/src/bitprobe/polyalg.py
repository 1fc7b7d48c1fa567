"""Multilinear polynomials over GF(2)/GF(3) and the degree argument.

Variables are memory locations. A monomial is a bitmask of variable
indices, so multiplication of monomials is OR and ``x**2 = x`` holds
automatically, which is the right arithmetic for 0/1 assignments.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import Budget, resolve
from .errors import BudgetExceeded, NoGainAvailable
from .lowerlab.probemap import Layout, ProbeMap
from .probegraph import LabeledBipartiteGraph


class MultilinearPoly:
    __slots__ = ("p", "num_vars", "_terms")

    def __init__(self, p: int, num_vars: int, terms: Mapping[int, int] | None = None):
        if p not in (2, 3):
            raise ValueError("only GF(2) and GF(3) are supported")
        self.p = p
        self.num_vars = num_vars
        clean = {}
        for mono, c in (terms or {}).items():
            if mono >> num_vars:
                raise ValueError("monomial uses a variable out of range")
            c %= p
            if c:
                clean[mono] = c
        self._terms = clean

    @classmethod
    def const(cls, p: int, num_vars: int, c: int) -> MultilinearPoly:
        return cls(p, num_vars, {0: c})

    @classmethod
    def var(cls, p: int, num_vars: int, i: int) -> MultilinearPoly:
        return cls(p, num_vars, {1 << i: 1})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def _coerce(self, other) -> MultilinearPoly:
        if isinstance(other, MultilinearPoly):
            if (other.p, other.num_vars) != (self.p, self.num_vars):
                raise ValueError("incompatible polynomial rings")
            return other
        return MultilinearPoly.const(self.p, self.num_vars, int(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return MultilinearPoly(self.p, self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultilinearPoly(self.p, self.num_vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = m1 | m2
                out[key] = out.get(key, 0) + c1 * c2
        return MultilinearPoly(self.p, self.num_vars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return (self.p, self.num_vars, self._terms) == (other.p, other.num_vars, other._terms)

    def __hash__(self):
        return hash((self.p, self.num_vars, frozenset(self._terms.items())))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((bin(k).count("1") for k in self._terms), default=-1)

    def evaluate(self, assignment: Sequence[int]) -> int:
        mask = sum(1 << i for i, b in enumerate(assignment) if b)
        return self.evaluate_mask(mask)

    def evaluate_mask(self, mask: int) -> int:
        return sum(c for k, c in self._terms.items() if k & ~mask == 0) % self.p

    def evaluate_many(self, masks: np.ndarray) -> np.ndarray:
        """Values at many assignments given as integer masks (bit i = var i)."""
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros(masks.shape, dtype=np.int64)
        for k, c in self._terms.items():
            out += c * ((masks & k) == k)
        return out % self.p

    def substitute_product(self, a: int, b: int, c: int) -> MultilinearPoly:
        """Replace ``x_a * x_b`` by ``x_c`` in every monomial containing both."""
        both = (1 << a) | (1 << b)
        out: dict[int, int] = {}
        for k, coef in self._terms.items():
            if k & both == both:
                k = (k & ~both) | (1 << c)
            out[k] = out.get(k, 0) + coef
        return MultilinearPoly(self.p, self.num_vars, out)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        items = [(tuple(i for i in range(self.num_vars) if k >> i & 1), c)
                 for k, c in self._terms.items()]
        return sorted(items, key=lambda it: (len(it[0]), it[0]))

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical text, e.g. ``F2: 1 + v0*v3``."""
        names = names or [f"v{i}" for i in range(self.num_vars)]
        parts = []
        for mono, c in self.sorted_terms():
            body = "*".join(names[i] for i in mono) or "1"
            parts.append(body if c == 1 else f"{c}*{body}" if mono else str(c))
        return f"F{self.p}: " + (" + ".join(parts) if parts else "0")

    def __repr__(self):
        return f"MultilinearPoly({self.to_text()})"


def variable_names(pm: ProbeMap) -> list[str]:
    if pm.layout is Layout.SINGLE_ARRAY:
        return [f"m{i}" for i in range(pm.s)]
    return [f"{'abc'[j] if pm.t == 3 else f'a{j}_'}{i}" for j in range(pm.t) for i in range(pm.s)]


# ------------------------------------------------------------- P_S polys

class PolyKind(enum.Enum):
    XY_PLUS_Z = "XY_PLUS_Z"  # (x AND y) XOR z over GF(2)
    SUM_EQ_1 = "SUM_EQ_1"    # x + y + z = 1 over GF(3)

    @property
    def field(self) -> int:
        return 2 if self is PolyKind.XY_PLUS_Z else 3


def element_factor(pm: ProbeMap, kind: PolyKind, u: int) -> MultilinearPoly:
    p, nv = kind.field, pm.total_bits
    x, y, z = (MultilinearPoly.var(p, nv, int(v)) for v in pm.locations()[u])
    if kind is PolyKind.XY_PLUS_Z:
        return x * y + z
    return x + y + z + x * y + y * z + z * x


def build_PS(pm: ProbeMap, kind: PolyKind, S: Iterable[int]) -> MultilinearPoly:
    """Product of per-element factors; equals 1 exactly when all of ``S`` answer 1."""
    out = MultilinearPoly.const(kind.field, pm.total_bits, 1)
    for u in sorted(set(S)):
        out = out * element_factor(pm, kind, u)
    return out


def memory_mask(memory: Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(memory) if b)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    mat = [list(int(v) % p for v in r) for r in rows]
    rank, cols = 0, len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c]:
                f = mat[r][c]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def left_kernel_vector(rows: Sequence[Sequence[int]], p: int) -> list[int] | None:
    """Non-zero ``a`` with ``sum a_i rows_i = 0`` mod p, or None."""
    k = len(rows)
    if k == 0:
        return None
    cols = len(rows[0])
    aug = [list(int(v) % p for v in r) + [1 if j == i else 0 for j in range(k)]
           for i, r in enumerate(rows)]
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, k) if aug[r][c]), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][c], -1, p)
        aug[rank] = [v * inv % p for v in aug[rank]]
        for r in range(k):
            if r != rank and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(a - f * b) % p for a, b in zip(aug[r], aug[rank])]
        rank += 1
    if rank == k:
        return None
    return aug[rank][cols:]


def coefficient_rows(polys: Sequence[MultilinearPoly]) -> list[list[int]]:
    monos = sorted({k for P in polys for k in P.terms})
    return [[P.terms.get(k, 0) for k in monos] for P in polys]


def spanning_bound(num_vars: int, n: int) -> tuple[int, int]:
    """(number of monomials of degree <= 2n, the binomial upper bound)."""
    exact = sum(math.comb(num_vars, k) for k in range(min(2 * n, num_vars) + 1))
    return exact, math.comb(num_vars + 2 * n, 2 * n)


@dataclass(frozen=True)
class IndependenceReport:
    sets: tuple[tuple[int, ...], ...]
    matrix: np.ndarray = field(compare=False)
    identity: bool
    rank: int
    spanning: int
    spanning_binomial: int


def independence_check(pm: ProbeMap, kind: PolyKind, n: int,
                       assignments: Mapping[tuple[int, ...], Sequence[int]]) -> IndependenceReport:
    """Evaluation matrix ``M[S, S'] = P_S(sigma(S'))`` and coefficient rank.

    ``assignments`` maps every ``n``-set (sorted tuple) to a memory storing it.
    """
    sets = tuple(sorted(tuple(sorted(S)) for S in assignments))
    if len(sets) != math.comb(pm.m, n) or any(len(S) != n for S in sets):
        raise ValueError("need a memory for every set of size n")
    polys = [build_PS(pm, kind, S) for S in sets]
    masks = np.array([memory_mask(assignments[S]) for S in sets], dtype=np.int64)
    M = np.stack([P.evaluate_many(masks) for P in polys]) if polys else np.zeros((0, 0), dtype=np.int64)
    rank = rank_mod_p(coefficient_rows(polys), kind.field)
    span, binom = spanning_bound(pm.total_bits, n)
    return IndependenceReport(sets, M, bool(np.array_equal(M, np.eye(len(sets), dtype=np.int64))),
                              rank, span, binom)


# ------------------------------------------------------ gains/restriction

@dataclass(frozen=True)
class GainEvidence:
    kind: str            # "intersect" or "trap"
    e1: int
    e2: int
    trapped: int | None = None
    shared: str | None = None  # "left"/"right" for intersections


def gains(graph: LabeledBipartiteGraph, edges: Iterable[int],
          exclude: Iterable[int] = ()) -> GainEvidence | None:
    """Evidence that ``edges`` gains: two of them share an endpoint, or two of
    them trap an edge outside ``edges`` and ``exclude``."""
    chosen = sorted(set(edges))
    ends = graph.endpoints()
    for e1, e2 in combinations(chosen, 2):
        if ends[e1][0] == ends[e2][0]:
            return GainEvidence("intersect", e1, e2, shared="left")
        if ends[e1][1] == ends[e2][1]:
            return GainEvidence("intersect", e1, e2, shared="right")
    by_left = {ends[e][0]: e for e in chosen}
    by_right = {ends[e][1]: e for e in chosen}
    skip = set(chosen) | set(exclude)
    for a, b, lab in sorted(graph.edges, key=lambda e: e[2]):
        if lab in skip:
            continue
        e1, e2 = by_left.get(a), by_right.get(b)
        if e1 is not None and e2 is not None and e1 != e2:
            return GainEvidence("trap", e1, e2, trapped=lab)
    return None


def is_good_gainer(graph: LabeledBipartiteGraph, edges: Iterable[int], k: int,
                   budget: Budget | None = None) -> bool:
    """Every ``2k``-subset of ``edges`` gains."""
    budget = resolve(budget)
    chosen = sorted(set(edges))
    size = min(2 * k, len(chosen))
    if math.comb(len(chosen), size) > budget.subsets:
        raise BudgetExceeded("too many subsets to test")
    return all(gains(graph, sub) is not None for sub in combinations(chosen, size))


def prune_low_degree(graph: LabeledBipartiteGraph, min_degree: float) -> tuple[LabeledBipartiteGraph, set[int]]:
    """Repeatedly drop vertices of degree below ``min_degree`` with their edges."""
    edges = list(graph.edges)
    removed: set[int] = set()
    while True:
        deg_l: dict[int, int] = {}
        deg_r: dict[int, int] = {}
        for a, b, _ in edges:
            deg_l[a] = deg_l.get(a, 0) + 1
            deg_r[b] = deg_r.get(b, 0) + 1
        keep = [e for e in edges if deg_l[e[0]] >= min_degree and deg_r[e[1]] >= min_degree]
        if len(keep) == len(edges):
            break
        removed |= {e[2] for e in edges} - {e[2] for e in keep}
        edges = keep
    return LabeledBipartiteGraph(graph.left_size, graph.right_size, tuple(edges)), removed


@dataclass(frozen=True)
class RestrictionResult:
    poly: MultilinearPoly
    t_set: frozenset[int]
    steps: tuple[GainEvidence, ...]
    degree_bound: int


def restrict_polynomial(pm: ProbeMap, S: Iterable[int], c: int,
                        steps: int | None = None) -> RestrictionResult:
    """Lower the degree of ``P_S`` for ``(x AND y) XOR z`` by one per step.

    Each step takes two elements of ``S`` whose x/y edges either intersect
    (their product shares a variable) or trap the edge of an element ``t``
    outside ``S``; in the second case ``t`` joins ``T_S`` and the product
    ``x(v) y(w)`` (or ``x(w) y(v)``) is rewritten as ``z(t)``, which is valid
    whenever ``t`` is not stored. The result agrees with ``P_S`` on every
    memory that excludes ``T_S``.
    """
    if pm.layout is not Layout.THREE_ARRAYS or pm.t != 3:
        raise ValueError("restriction needs three separate arrays")
    S = sorted(set(S))
    n = len(S)
    if c < 1:
        raise ValueError("c must be positive")
    steps = n // (2 * c) if steps is None else steps
    graph = pm.bipartite(0, 1)
    loc = pm.locations()
    kind = PolyKind.XY_PLUS_Z
    remaining = list(S)
    product = MultilinearPoly.const(2, pm.total_bits, 1)
    T: set[int] = set()
    log = []
    for _ in range(steps):
        ev = gains(graph, remaining, exclude=S)
        if ev is None:
            raise NoGainAvailable(f"no intersecting or trapping pair among {remaining}")
        v, w = ev.e1, ev.e2
        pair = element_factor(pm, kind, v) * element_factor(pm, kind, w)
        if ev.kind == "trap":
            t = ev.trapped
            T.add(t)
            xt, yt, zt = (int(i) for i in loc[t])
            # the trapped edge joins x(t) = x(e1) and y(t) = y(e2)
            pair = pair.substitute_product(xt, yt, zt)
        product = product * pair
        remaining = [u for u in remaining if u not in (v, w)]
        log.append(ev)
    for u in remaining:
        product = product * element_factor(pm, kind, u)
    return RestrictionResult(product, frozenset(T), tuple(log), 2 * n - steps)


def agrees_on_restriction(pm: ProbeMap, S: Iterable[int], result: RestrictionResult,
                          budget: Budget | None = None) -> bool:
    """``P_hat == P_S`` on every memory where all of ``T_S`` answer 0.

    This covers every memory representing a set that avoids ``T_S``.
    """
    budget = resolve(budget)
    nb = pm.total_bits
    if nb > budget.bits:
        raise BudgetExceeded(f"{nb} bits exceed the exhaustive limit")
    full = build_PS(pm, PolyKind.XY_PLUS_Z, S)
    masks = np.arange(1 << nb, dtype=np.int64)
    keep = np.ones(masks.size, dtype=bool)
    for t in result.t_set:
        keep &= element_factor(pm, PolyKind.XY_PLUS_Z, t).evaluate_many(masks) == 0
    masks = masks[keep]
    return bool(np.array_equal(full.evaluate_many(masks), result.poly.evaluate_many(masks)))
