from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bitprobe import probegraph as pg
from bitprobe.config import Budget
from bitprobe.errors import BudgetExceeded, MatchingInfeasible


# ------------------------------------------------------------ brute oracles

def brute_girth(num_vertices, edges):
    """Length of a shortest cycle by exhaustive DFS over simple cycles."""
    best = None
    adj = [[] for _ in range(num_vertices)]
    for a, b, lab in edges:
        if a == b:
            return 1
        adj[a].append((b, lab))
        adj[b].append((a, lab))

    def dfs(start, u, used_v, used_l):
        nonlocal best
        for v, lab in adj[u]:
            if lab in used_l:
                continue
            if v == start:
                L = len(used_l) + 1
                if best is None or L < best:
                    best = L
            elif v not in used_v and v > start:
                dfs(start, v, used_v | {v}, used_l | {lab})

    for s in range(num_vertices):
        dfs(s, s, {s}, frozenset())
    return best


def brute_expansion(gl, r_max, factor):
    m = gl.shape[0]
    for r in range(1, min(r_max, m) + 1):
        for R in combinations(range(m), r):
            if len(set(gl[list(R)].ravel().tolist())) < factor * r:
                return R
    return None


def brute_hall_feasible(nbrs, mult):
    keys = list(nbrs)
    for r in range(1, len(keys) + 1):
        for X in combinations(keys, r):
            if len(set().union(*(nbrs[k] for k in X))) < mult * r:
                return False
    return True


@st.composite
def multigraphs(draw, max_v=7, max_e=10):
    n = draw(st.integers(1, max_v))
    k = draw(st.integers(0, max_e))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                          min_size=k, max_size=k))
    return pg.LabeledGraph(n, tuple((a, b, i) for i, (a, b) in enumerate(pairs)))


# ------------------------------------------------------------------ graphs

def test_global_neighbors_blocks():
    g = pg.NonAdaptiveProbeGraph(3, 2, 4, np.array([[0, 3], [1, 1], [2, 0]]))
    assert g.global_neighbors().tolist() == [[0, 7], [1, 5], [2, 4]]
    assert g.num_locations == 8
    assert g.neighborhood([0, 2]) == {0, 7, 2, 4}


def test_rejects_out_of_range():
    with pytest.raises(ValueError):
        pg.NonAdaptiveProbeGraph(1, 2, 2, np.array([[0, 2]]))


@pytest.mark.parametrize("prefix,idx", [((), 0), ((0,), 1), ((1,), 2), ((0, 1), 4), ((1, 1), 6)])
def test_heap_index(prefix, idx):
    assert pg.heap_index(prefix) == idx


def test_adaptive_leaves():
    g = pg.build_random_adaptive(5, 4, 3, seed=1)
    assert list(g.leaf_blocks) == [3, 4, 5, 6]
    gl = g.global_neighbors()
    for u in range(5):
        assert g.leaves(u) == {int(gl[u, b]) for b in range(3, 7)}


def test_random_graphs_deterministic():
    a = pg.build_random_nonadaptive(10, 6, 3, seed=(4, 2))
    b = pg.build_random_nonadaptive(10, 6, 3, seed=(4, 2))
    c = pg.build_random_nonadaptive(10, 6, 3, seed=(4, 3))
    assert a == b
    assert a != c


# --------------------------------------------------------------- expansion

@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6),
       st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)]))
def test_expansion_matches_brute(m, t, s, seed, factor):
    g = pg.build_random_nonadaptive(m, s, t, seed=seed)
    r_max = 3
    assert pg.check_expansion(g, r_max, factor) == brute_expansion(g.global_neighbors(), r_max, factor)


def test_expansion_restricted_elements():
    g = pg.NonAdaptiveProbeGraph(4, 1, 4, np.array([[0], [0], [1], [2]]))
    assert pg.check_expansion(g, 2, 1) == (0, 1)
    assert pg.check_expansion(g, 2, 1, elements=[1, 2, 3]) is None


def test_expansion_budget():
    g = pg.build_random_nonadaptive(30, 5, 3, seed=0)
    with pytest.raises(BudgetExceeded):
        pg.check_expansion(g, 10, 2, budget=Budget(subsets=1000))


def test_sample_expansion_reports():
    g = pg.NonAdaptiveProbeGraph(3, 1, 1, np.zeros((3, 1), dtype=int))
    rep = pg.sample_expansion(g, 2, 1, samples=50, seed=0)
    assert rep["samples"] == 50
    assert rep["min_ratio"] <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6),
       st.sets(st.integers(0, 7), max_size=3))
def test_survivors_brute(m, t, s, seed, S):
    S = {u for u in S if u < m}
    g = pg.build_random_nonadaptive(m, s, t, seed=seed)
    gl = g.global_neighbors()
    hood = {int(v) for u in S for v in gl[u]}
    want = {y for y in range(m) if y not in S and set(gl[y].tolist()) <= hood}
    assert pg.survivors(g, S) == want
    for th in range(t + 2):
        # each probe has its own block, so locations of one element are distinct
        heavy = {y for y in range(m) if y not in S and len(set(gl[y].tolist()) & hood) >= th}
        assert pg.heavy_overlaps(g, S, th) == heavy


# --------------------------------------------------------------------- Hall

@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.integers(0, 5), st.sets(st.integers(0, 8), max_size=5), max_size=5),
       st.integers(0, 3))
def test_hall_representatives(nbrs, mult):
    feasible = brute_hall_feasible(nbrs, mult)
    try:
        reps = pg.hall_disjoint_representatives(nbrs, mult)
    except MatchingInfeasible as exc:
        assert not feasible
        assert pg.hall_violated(nbrs, mult, exc.certificate)
        assert exc.demand > exc.supply
        return
    assert feasible
    seen = set()
    for k, A in reps.items():
        assert len(A) == mult
        assert A <= set(nbrs[k])
        assert not A & seen
        seen |= A


def test_hall_violated_false_for_fine_set():
    assert not pg.hall_violated({0: {1, 2}, 1: {2, 3}}, 1, [0, 1])
    assert pg.hall_violated({0: {1}, 1: {1}}, 1, [0, 1])


def test_hall_negative_multiplicity():
    with pytest.raises(ValueError):
        pg.hall_disjoint_representatives({0: {1}}, -1)


# ------------------------------------------------------------------- cycles

@settings(max_examples=300, deadline=None)
@given(multigraphs(), st.integers(1, 8))
def test_find_short_cycle_matches_brute(g, max_len):
    girth = brute_girth(g.num_vertices, g.edges)
    cyc = pg.find_short_cycle(g, max_len)
    if girth is None or girth > max_len:
        assert cyc is None
    else:
        assert cyc is not None
        assert len(cyc) == girth
        assert pg.is_cycle_of(g, cyc)
        assert cyc.vertices[0] == min(cyc.vertices)


def brute_path_len(edges, a, b):
    """Fewest edges on a simple a-b path, by DFS over all simple paths."""
    best = None

    def dfs(u, seen, k):
        nonlocal best
        if u == b:
            best = k if best is None else min(best, k)
            return
        for x, y, _ in edges:
            for p, q in ((x, y), (y, x)):
                if p == u and q not in seen:
                    dfs(q, seen | {q}, k + 1)

    dfs(a, {a}, 0)
    return best


@settings(max_examples=200, deadline=None)
@given(multigraphs(), st.data())
def test_shortest_cycle_through_matches_brute(g, data):
    if not g.edges:
        return
    lab = data.draw(st.sampled_from([e[2] for e in g.edges]))
    cyc = pg.shortest_cycle_through(g, lab, 99)
    a, b = g.endpoints()[lab]
    if a == b:
        assert cyc is not None and len(cyc) == 1
        return
    rest = [e for e in g.without([lab]).edges if e[0] != e[1]]
    dist = brute_path_len(rest, a, b)
    if dist is None:
        assert cyc is None
    else:
        assert len(cyc) == dist + 1
        assert lab in cyc.labels
        assert pg.is_cycle_of(g, cyc)


def test_parallel_edges_make_two_cycle():
    g = pg.LabeledGraph(3, ((0, 1, 5), (1, 2, 6), (1, 0, 7)))
    cyc = pg.find_short_cycle(g, 4)
    assert len(cyc) == 2 and set(cyc.labels) == {5, 7}


def test_cycle_rotation_helpers():
    c = pg.Cycle((0, 1, 2), (10, 11, 12))
    assert c.starting_with(11) == pg.Cycle((1, 2, 0), (11, 12, 10))
    r = c.reversed()
    assert r.vertices[0] == 0 and r.labels == (12, 11, 10)


@settings(max_examples=150, deadline=None)
@given(st.integers(3, 12), st.integers(0, 10**6), st.floats(1.0, 2.5))
def test_moore_bound_cycle_exists(nv, seed, mult):
    rng = np.random.default_rng(seed)
    ne = int(nv * mult) + 1
    edges = tuple((int(rng.integers(nv)), int(rng.integers(nv)), i) for i in range(ne))
    g = pg.LabeledGraph(nv, edges)
    bound = pg.moore_cycle_bound(nv, ne)
    if bound is None:
        assert 2 * ne <= 2 * nv
        return
    d = 2 * ne / nv
    k = bound // 2
    assert (d - 1) ** k > nv
    cyc = pg.find_short_cycle(g, bound)
    assert cyc is not None and len(cyc) <= bound


@pytest.mark.parametrize("nv,ne,want", [(10, 10, None), (10, 15, 8), (4, 6, 6), (8, 16, 4)])
def test_moore_bound_values(nv, ne, want):
    assert pg.moore_cycle_bound(nv, ne) == want


def test_bipartite_as_graph():
    b = pg.bipartite_from_pairs(2, 2, {3: (0, 1), 4: (1, 1), 5: (1, 0), 6: (0, 0)})
    g = b.as_graph()
    assert g.num_vertices == 4
    cyc = pg.find_short_cycle(b, 4)
    assert len(cyc) == 4 and pg.is_cycle_of(b, cyc)
    assert b.restricted([3, 4]).labels() == [3, 4]
