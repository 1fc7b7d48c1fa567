"""Probe graphs, expansion checks, disjoint representatives and short cycles.

Elements and locations are 0-based. A non-adaptive graph on ``t`` blocks of
``s`` locations gives each element one neighbour per block; the global index
of location ``j`` in block ``i`` is ``i * s + j``. Adaptive graphs have one
block per node of a complete binary tree of depth ``t`` in heap order (root
0, children of ``k`` are ``2k + 1`` for bit 0 and ``2k + 2`` for bit 1).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .config import Budget, resolve
from .errors import BudgetExceeded, MatchingInfeasible


def make_rng(seed) -> np.random.Generator:
    """Deterministic generator; ``seed`` may be an int or a tuple of ints."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = list(seed) if isinstance(seed, (tuple, list)) else seed
    return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass(frozen=True, eq=False)
class NonAdaptiveProbeGraph:
    m: int
    t: int
    s: int
    neighbor: np.ndarray  # (m, t), entries in [0, s)

    def __post_init__(self):
        nb = np.asarray(self.neighbor, dtype=np.int64).reshape(self.m, self.t)
        if nb.size and (nb.min() < 0 or nb.max() >= self.s):
            raise ValueError("neighbour index out of range")
        nb.setflags(write=False)
        object.__setattr__(self, "neighbor", nb)

    @property
    def num_locations(self) -> int:
        return self.t * self.s

    def global_neighbors(self) -> np.ndarray:
        return self.neighbor + self.s * np.arange(self.t, dtype=np.int64)[None, :]

    def neighborhood(self, elements: Iterable[int]) -> set[int]:
        gl = self.global_neighbors()
        return {int(v) for u in elements for v in gl[u]}

    def __eq__(self, other):
        return (isinstance(other, NonAdaptiveProbeGraph)
                and (self.m, self.t, self.s) == (other.m, other.t, other.s)
                and np.array_equal(self.neighbor, other.neighbor))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class AdaptiveProbeGraph:
    m: int
    t: int
    s: int
    neighbor: np.ndarray  # (m, 2**t - 1), heap-ordered blocks

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("adaptive depth must be at least 1")
        nb = np.asarray(self.neighbor, dtype=np.int64).reshape(self.m, self.num_blocks)
        if nb.size and (nb.min() < 0 or nb.max() >= self.s):
            raise ValueError("neighbour index out of range")
        nb.setflags(write=False)
        object.__setattr__(self, "neighbor", nb)

    @property
    def num_blocks(self) -> int:
        return (1 << self.t) - 1

    @property
    def num_locations(self) -> int:
        return self.num_blocks * self.s

    @property
    def leaf_blocks(self) -> range:
        return range((1 << (self.t - 1)) - 1, self.num_blocks)

    def global_neighbors(self) -> np.ndarray:
        return self.neighbor + self.s * np.arange(self.num_blocks, dtype=np.int64)[None, :]

    def neighborhood(self, elements: Iterable[int]) -> set[int]:
        gl = self.global_neighbors()
        return {int(v) for u in elements for v in gl[u]}

    def leaves(self, u: int) -> set[int]:
        gl = self.global_neighbors()
        return {int(gl[u, b]) for b in self.leaf_blocks}

    def __eq__(self, other):
        return (isinstance(other, AdaptiveProbeGraph)
                and (self.m, self.t, self.s) == (other.m, other.t, other.s)
                and np.array_equal(self.neighbor, other.neighbor))

    __hash__ = None


def heap_index(prefix: Sequence[int]) -> int:
    """Block index of the tree node reached after reading ``prefix``."""
    node = 0
    for b in prefix:
        node = 2 * node + 1 + int(b)
    return node


def build_random_nonadaptive(m: int, s: int, t: int, seed=0) -> NonAdaptiveProbeGraph:
    if m < 1 or s < 1 or t < 0:
        raise ValueError("need m >= 1, s >= 1, t >= 0")
    rng = make_rng(seed)
    return NonAdaptiveProbeGraph(m, t, s, rng.integers(0, s, size=(m, t)))


def build_random_adaptive(m: int, s: int, t: int, seed=0) -> AdaptiveProbeGraph:
    if m < 1 or s < 1 or t < 1:
        raise ValueError("need m >= 1, s >= 1, t >= 1")
    rng = make_rng(seed)
    return AdaptiveProbeGraph(m, t, s, rng.integers(0, s, size=(m, (1 << t) - 1)))


def _subset_count(m: int, r_max: int) -> int:
    return sum(math.comb(m, r) for r in range(1, r_max + 1))


def check_expansion(g, r_max: int, factor, budget: Budget | None = None,
                    elements: Sequence[int] | None = None) -> tuple[int, ...] | None:
    """Smallest set ``R`` (by size, then lexicographically) with
    ``|Gamma(R)| < factor * |R|`` and ``|R| <= r_max``, or None.

    ``elements`` restricts the check to subsets of the given elements; the
    returned tuple then holds original element ids.
    """
    budget = resolve(budget)
    factor = Fraction(factor)
    gl = g.global_neighbors()
    if elements is not None:
        elements = sorted(elements)
        gl = gl[elements]
    r_max = min(r_max, gl.shape[0])
    if r_max < 1:
        return None
    if _subset_count(gl.shape[0], r_max) > budget.subsets:
        raise BudgetExceeded(f"expansion check needs {_subset_count(gl.shape[0], r_max)} subsets")
    bad = kernels.expansion_violation(kernels.as_locs(gl), g.num_locations, 1, r_max,
                                      factor.numerator, factor.denominator)
    if bad.size == 0:
        return None
    idx = [int(i) for i in bad]
    return tuple(elements[i] for i in idx) if elements is not None else tuple(idx)


def sample_expansion(g, r_max: int, factor, samples: int, seed=0) -> dict:
    """Monte-Carlo estimate of expansion; reports, never certifies."""
    rng = make_rng(seed)
    factor = Fraction(factor)
    gl = g.global_neighbors()
    worst = None
    failures = 0
    for _ in range(samples):
        r = int(rng.integers(1, min(r_max, g.m) + 1))
        R = np.sort(rng.choice(g.m, size=r, replace=False))
        size = len(np.unique(gl[R]))
        ratio = Fraction(size, r)
        if ratio < factor:
            failures += 1
        if worst is None or ratio < worst[0]:
            worst = (ratio, tuple(int(u) for u in R))
    return {"samples": samples, "failures": failures,
            "min_ratio": worst[0] if worst else None, "witness": worst[1] if worst else None}


def heavy_overlaps(g: NonAdaptiveProbeGraph, S: Iterable[int], threshold: int) -> set[int]:
    """Elements outside ``S`` sharing at least ``threshold`` locations with ``Gamma(S)``."""
    S = set(S)
    gl = g.global_neighbors()
    hood = np.zeros(g.num_locations, dtype=bool)
    for u in S:
        hood[gl[u]] = True
    hits = hood[gl].sum(axis=1) if g.t else np.zeros(g.m, dtype=np.int64)
    return {y for y in range(g.m) if y not in S and hits[y] >= threshold}


def survivors(g1: NonAdaptiveProbeGraph, S: Iterable[int]) -> set[int]:
    """Elements outside ``S`` whose whole neighbourhood lies inside ``Gamma(S)``."""
    S = set(S)
    gl = g1.global_neighbors()
    hood = np.zeros(max(g1.num_locations, 1), dtype=bool)
    for u in S:
        hood[gl[u]] = True
    inside = hood[gl].all(axis=1) if g1.t else np.ones(g1.m, dtype=bool)
    return {y for y in range(g1.m) if y not in S and inside[y]}


def survivors_plus(g1: NonAdaptiveProbeGraph, g2: AdaptiveProbeGraph, S: Iterable[int]) -> set[int]:
    """Survivors that share a leaf location with ``S``."""
    S = set(S)
    leaf_set = set()
    for u in S:
        leaf_set |= g2.leaves(u)
    return {y for y in survivors(g1, S) if g2.leaves(y) & leaf_set}


def hall_disjoint_representatives(neighbor_sets: Mapping[Hashable, Iterable[int]],
                                  multiplicity: int) -> dict[Hashable, frozenset[int]]:
    """Pairwise disjoint ``A_u`` of size ``multiplicity`` with ``A_u`` inside ``N(u)``.

    Each element is replicated ``multiplicity`` times and matched by
    augmenting paths. On failure raises ``MatchingInfeasible`` carrying the
    elements of the stuck alternating tree, whose neighbourhood is too small.
    """
    if multiplicity < 0:
        raise ValueError("multiplicity must be non-negative")
    keys = sorted(neighbor_sets)
    nbrs = {k: sorted(set(neighbor_sets[k])) for k in keys}
    left = [k for k in keys for _ in range(multiplicity)]
    owner: dict[int, int] = {}  # location -> left index
    for i, key in enumerate(left):
        reached_from: dict[int, int] = {}
        visited = {i}
        queue = deque([i])
        free = None
        while queue and free is None:
            l = queue.popleft()
            for loc in nbrs[left[l]]:
                if loc in reached_from:
                    continue
                reached_from[loc] = l
                if loc not in owner:
                    free = loc
                    break
                nxt = owner[loc]
                if nxt not in visited:
                    visited.add(nxt)
                    queue.append(nxt)
        if free is None:
            cert = {left[j] for j in visited}
            supply = set().union(*(nbrs[k] for k in cert))
            raise MatchingInfeasible(cert, multiplicity * len(cert), len(supply))
        loc = free
        while True:
            l = reached_from[loc]
            prev = next((p for p, o in owner.items() if o == l), None)
            owner[loc] = l
            if prev is None:
                break
            loc = prev
    out: dict[Hashable, set[int]] = {k: set() for k in keys}
    for loc, l in owner.items():
        out[left[l]].add(loc)
    return {k: frozenset(v) for k, v in out.items()}


def hall_violated(neighbor_sets: Mapping[Hashable, Iterable[int]], multiplicity: int,
                  certificate: Iterable[Hashable]) -> bool:
    """True if ``certificate`` really demands more than its neighbourhood holds."""
    cert = set(certificate)
    supply = set()
    for k in cert:
        supply |= set(neighbor_sets[k])
    return multiplicity * len(cert) > len(supply)


# ---------------------------------------------------------------- cycles


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected multigraph whose edges carry distinct integer labels."""

    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (a, b, label)

    def endpoints(self) -> dict[int, tuple[int, int]]:
        return {lab: (a, b) for a, b, lab in self.edges}

    def degree(self) -> list[int]:
        deg = [0] * self.num_vertices
        for a, b, _ in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def without(self, labels: Iterable[int]) -> LabeledGraph:
        drop = set(labels)
        return LabeledGraph(self.num_vertices, tuple(e for e in self.edges if e[2] not in drop))


@dataclass(frozen=True)
class LabeledBipartiteGraph:
    """Bipartite multigraph; right vertex ``j`` is vertex ``left_size + j``
    once converted with ``as_graph``."""

    left_size: int
    right_size: int
    edges: tuple[tuple[int, int, int], ...]  # (left, right, label)

    def as_graph(self) -> LabeledGraph:
        return LabeledGraph(self.left_size + self.right_size,
                            tuple((a, self.left_size + b, lab) for a, b, lab in self.edges))

    def labels(self) -> list[int]:
        return [lab for _, _, lab in self.edges]

    def endpoints(self) -> dict[int, tuple[int, int]]:
        return {lab: (a, b) for a, b, lab in self.edges}

    def restricted(self, labels: Iterable[int]) -> LabeledBipartiteGraph:
        keep = set(labels)
        return LabeledBipartiteGraph(self.left_size, self.right_size,
                                     tuple(e for e in self.edges if e[2] in keep))


@dataclass(frozen=True)
class Cycle:
    """``labels[i]`` joins ``vertices[i]`` and ``vertices[(i + 1) % len]``."""

    vertices: tuple[int, ...]
    labels: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.labels)

    def rotate(self, i: int) -> Cycle:
        """Same cycle with ``labels[i]`` moved to the front."""
        return Cycle(self.vertices[i:] + self.vertices[:i], self.labels[i:] + self.labels[:i])

    def reversed(self) -> Cycle:
        """Same cycle walked backwards, still starting at ``vertices[0]``."""
        L = len(self.labels)
        verts = (self.vertices[0],) + tuple(reversed(self.vertices[1:]))
        labs = tuple(self.labels[(-1 - i) % L] for i in range(L))
        return Cycle(verts, labs)

    def starting_with(self, label: int) -> Cycle:
        return self.rotate(self.labels.index(label))


def _as_graph(graph) -> LabeledGraph:
    return graph.as_graph() if isinstance(graph, LabeledBipartiteGraph) else graph


def is_cycle_of(graph, cyc: Cycle) -> bool:
    """Check ``cyc`` is a simple cycle of ``graph``."""
    g = _as_graph(graph)
    ends = g.endpoints()
    L = len(cyc.labels)
    if L == 0 or len(set(cyc.vertices)) != L or len(set(cyc.labels)) != L:
        return False
    for i, lab in enumerate(cyc.labels):
        if lab not in ends:
            return False
        a, b = cyc.vertices[i], cyc.vertices[(i + 1) % L]
        if sorted(ends[lab]) != sorted((a, b)):
            return False
    return True


def _canonical_cycle(verts: list[int], labs: list[int]) -> Cycle:
    start = verts.index(min(verts))
    cyc = Cycle(tuple(verts), tuple(labs)).rotate(start)
    if len(cyc) > 2 and cyc.labels[-1] < cyc.labels[0]:
        cyc = cyc.reversed()
    return cyc


def find_short_cycle(graph, max_len: int) -> Cycle | None:
    """A shortest cycle of length at most ``max_len``, or None.

    Parallel edges form a 2-cycle. Ties prefer the lowest BFS root and then
    the lowest closing label; the result starts at its lowest vertex.
    """
    g = _as_graph(graph)
    if max_len < 1:
        return None
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for a, b, lab in sorted(g.edges, key=lambda e: e[2]):
        if a == b:
            if max_len >= 1:
                return Cycle((a,), (lab,))
            continue
        adj[a].append((b, lab))
        adj[b].append((a, lab))
    cap = (max_len + 1) // 2
    best: tuple | None = None
    for root in range(g.num_vertices):
        dist = {root: 0}
        parent: dict[int, tuple[int, int]] = {}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if dist[u] >= cap:
                continue
            for v, lab in adj[u]:
                if u in parent and parent[u][1] == lab:
                    continue
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = (u, lab)
                    queue.append(v)
                    continue
                # non-tree edge closes a cycle through the two tree paths
                pu = _tree_path(parent, u)
                pv = _tree_path(parent, v)
                k = 0
                while k < min(len(pu), len(pv)) and pu[k] == pv[k]:
                    k += 1
                length = (len(pu) - k) + (len(pv) - k) + 1
                if length > max_len:
                    continue
                key = (length, root, lab)
                if best is None or key < best[0]:
                    best = (key, pu[k - 1:], pv[k - 1:], lab, parent)
        if best is not None and best[0][0] <= 2:
            break
    if best is None:
        return None
    _, pu, pv, lab, par = best
    # pu: lca .. u, pv: lca .. v ; walk lca -> u, close with lab, back v -> lca
    verts = list(pu) + list(reversed(pv[1:]))
    labs = [par[pu[i + 1]][1] for i in range(len(pu) - 1)] + [lab]
    labs += [par[pv[i]][1] for i in range(len(pv) - 1, 0, -1)]
    return _canonical_cycle(verts, labs)


def _tree_path(parent, v) -> list[int]:
    path = [v]
    while v in parent:
        v = parent[v][0]
        path.append(v)
    return path[::-1]


def shortest_cycle_through(graph, label: int, max_len: int) -> Cycle | None:
    """Shortest cycle using edge ``label``, found by BFS between its ends."""
    g = _as_graph(graph)
    ends = g.endpoints()
    if label not in ends:
        return None
    a, b = ends[label]
    if a == b:
        return Cycle((a,), (label,))
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for x, y, lab in sorted(g.edges, key=lambda e: e[2]):
        if lab != label and x != y:
            adj[x].append((y, lab))
            adj[y].append((x, lab))
    parent = {b: None}
    queue = deque([b])
    while queue:
        u = queue.popleft()
        if u == a:
            break
        for v, lab in adj[u]:
            if v not in parent:
                parent[v] = (u, lab)
                queue.append(v)
    if a not in parent:
        return None
    v = a
    # walk a -> ... -> b along parents, then close with ``label`` from b to a
    path_v, path_l = [], []
    while parent[v] is not None:
        u, lab = parent[v]
        path_l.append(lab)
        path_v.append(u)
        v = u
    # cycle: b -label- a -path_l[0]- path_v[0] ... -> b
    verts = [b, a] + path_v[:-1]
    labs = [label] + path_l
    if len(labs) > max_len:
        return None
    return Cycle(tuple(verts), tuple(labs))


def moore_cycle_bound(num_vertices: int, num_edges: int) -> int | None:
    """Smallest ``2k`` guaranteed by average degree: if ``d >= 2`` and
    ``(d - 1)**k > |V|`` a cycle of length at most ``2k`` exists."""
    if num_vertices == 0:
        return None
    d = 2 * num_edges / num_vertices
    if d <= 2:
        return None
    k = 1
    while (d - 1) ** k <= num_vertices:
        k += 1
    return 2 * k


def bipartite_from_pairs(left_size: int, right_size: int,
                         pairs: Mapping[int, tuple[int, int]]) -> LabeledBipartiteGraph:
    edges = tuple((int(a), int(b), int(lab)) for lab, (a, b) in sorted(pairs.items()))
    return LabeledBipartiteGraph(left_size, right_size, edges)
