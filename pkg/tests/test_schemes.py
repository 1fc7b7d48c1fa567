import math
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bitprobe import schemes as sc
from bitprobe.errors import AdmissibilityViolated, RetriesExhausted, SetTooLarge
from bitprobe.probegraph import NonAdaptiveProbeGraph, build_random_nonadaptive, heavy_overlaps


def brute_query(sch, mem, u):
    """Non-adaptive query computed straight from the probe rows."""
    gl = sch.graph.neighbor + sch.s * np.arange(sch.t)
    idx = int("".join(str(int(mem.bits[j])) for j in gl[u]), 2)
    return (sch.query_table >> idx) & 1


def brute_adaptive_query(inner, mem, u):
    off = inner.g1.num_locations
    if not all(mem.bits[j] for j in inner.g1.global_neighbors()[u]):
        return 0
    node, bit = 0, 0
    for _ in range(inner.t2):
        bit = int(mem.bits[off + node * inner.s + inner.g2.neighbor[u, node]])
        node = 2 * node + 1 + bit
    return bit


# ------------------------------------------------------------------ tables

@pytest.mark.parametrize("t,table", [(1, 0x2), (3, 0xE8)])
def test_majority_table(t, table):
    assert sc.majority_table(t) == table


def test_majority_table_t5():
    tab = sc.majority_table(5)
    for i in range(32):
        assert (tab >> i) & 1 == int(bin(i).count("1") >= 3)


def test_majority_rejects_even():
    with pytest.raises(ValueError):
        sc.majority_table(4)


@pytest.mark.parametrize("t,want", [(1, "2"), (2, "8"), (3, "80"), (4, "8000")])
def test_and_table_hex(t, want):
    assert sc.table_hex(sc.and_table(t), t) == want


# -------------------------------------------------------------------- grid

@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 9, 10, 17, 63, 64])
def test_grid_space_and_verify(m):
    sch = sc.grid_scheme_n1(m)
    assert sch.memory_length == 2 * math.ceil(math.sqrt(m))
    assert sc.verify_scheme(sch).ok


def test_grid_nine_indicator():
    sch = sc.grid_scheme_n1(9)
    assert sch.s == 3 and sch.t == 2
    mem = sch.encode({4})
    assert [brute_query(sch, mem, u) for u in range(9)] == [int(u == 4) for u in range(9)]


def test_grid_rejects_two():
    with pytest.raises(SetTooLarge):
        sc.grid_scheme_n1(9).encode({1, 2})


def test_characteristic_scheme():
    sch = sc.characteristic_scheme(5)
    assert sch.memory_length == 5
    assert sc.verify_scheme(sch).ok
    assert sch.encode({1, 3}).bits.tolist() == [0, 1, 0, 1, 0]


# ------------------------------------------------------------ non-adaptive

@pytest.fixture(scope="module")
def na_12_1_5():
    return sc.build_nonadaptive_scheme(12, 1, 5, seed=0)


def test_nonadaptive_report(na_12_1_5):
    sch = na_12_1_5
    rep = sch.report
    assert rep.factor == 3
    assert (rep.r_max, rep.overlap_bound) == sc.admissibility_bounds(12, 1)
    assert rep.max_overlap <= rep.overlap_bound
    assert sch.s == sc.default_block_size(12, 1, 5)
    assert sc.check_nonadaptive_admissible(sch.graph, 1) is not None


def test_nonadaptive_encode_matches_brute(na_12_1_5):
    sch = na_12_1_5
    for S in [(), (0,), (7,), (11,)]:
        mem = sch.encode(S)
        assert [brute_query(sch, mem, u) for u in range(12)] == [int(u in S) for u in range(12)]
        assert sch.query_all(mem).tolist() == [sch.query(mem, u) for u in range(12)]


def test_nonadaptive_two_elements():
    sch = sc.build_nonadaptive_scheme(10, 2, 5, seed=0)
    assert sc.verify_scheme(sch).ok
    for S in combinations(range(10), 2):
        mem = sch.encode(S)
        assert [brute_query(sch, mem, u) for u in range(10)] == [int(u in S) for u in range(10)]


def test_nonadaptive_deterministic():
    a = sc.build_nonadaptive_scheme(12, 1, 5, seed=3)
    b = sc.build_nonadaptive_scheme(12, 1, 5, seed=3)
    assert a.graph == b.graph and a.report == b.report


def test_retries_exhausted():
    with pytest.raises(RetriesExhausted):
        sc.build_nonadaptive_scheme(12, 1, 5, s=1, max_retries=3)


def test_admissibility_bounds():
    r_max, extra = sc.admissibility_bounds(12, 1)
    assert extra == math.ceil(2 * math.log2(24))
    assert r_max == min(12, 1 + extra)


def test_verify_catches_wrong_answer():
    # a grid where elements 0 and 1 share both row and column
    g = NonAdaptiveProbeGraph(3, 2, 2, np.array([[0, 0], [0, 0], [1, 1]]))
    sch = sc.GridScheme(3, 1, g, sc.and_table(2))
    rep = sc.verify_scheme(sch)
    assert not rep.ok
    assert rep.failing_set == (0,) and rep.failing_element == 1


def test_verify_reports_encode_failure():
    # elements 0 and 1 probe identical locations, so no matching exists
    g = NonAdaptiveProbeGraph(3, 3, 2, np.array([[0, 0, 0], [0, 0, 0], [1, 1, 1]]))
    sch = sc.NonAdaptiveScheme(3, 1, g, sc.majority_table(3))
    rep = sc.verify_scheme(sch)
    assert not rep.ok
    assert rep.failing_set == (0,) and rep.reason.startswith("encode failed")


def test_overlap_guard():
    g = build_random_nonadaptive(8, 3, 3, seed=0)
    rep = sc.AdmissibilityReport(3, 2, overlap_bound=0)
    sch = sc.NonAdaptiveScheme(8, 1, g, sc.majority_table(3), rep)
    hit = [u for u in range(8) if heavy_overlaps(g, {u}, 2)]
    assert hit
    with pytest.raises(AdmissibilityViolated):
        sch.encode({hit[0]})


@given(st.sets(st.integers(0, 9), max_size=4), st.integers(0, 4))
def test_pad_set(S, n):
    n = max(n, len(S))
    out = sc.pad_set(S, 10, n)
    assert set(S) <= set(out)
    assert len(out) == min(10, n)
    assert out == sorted(out)


# ---------------------------------------------------------------- forcing

@pytest.mark.parametrize("t2", [1, 2, 3])
def test_force_tree_output_exhaustive(t2):
    alpha = (1 << t2) - 1
    beta = (1 << t2) - t2
    for controlled in combinations(range(alpha), beta):
        for b in (0, 1):
            vals = sc.force_tree_output(t2, controlled, b)
            assert set(vals) <= set(controlled)
            free = [k for k in range(alpha) if k not in vals]
            for fill in product((0, 1), repeat=len(free)):
                full = dict(vals)
                full.update(zip(free, fill))
                assert sc.tree_output(t2, full) == b


def test_force_tree_output_too_few():
    with pytest.raises(ValueError):
        sc.force_tree_output(3, [0, 1, 2, 3], 1)


def test_force_tree_output_small_case():
    assert sc.force_tree_output(2, {0, 1}, 1) == {1: 1, 0: 0}


@pytest.mark.parametrize("t,split", [(3, (0, 3)), (5, (1, 4)), (7, (2, 5))])
def test_split_depth(t, split):
    assert sc.split_depth(t) == split


# --------------------------------------------------------------- adaptive

@pytest.fixture(scope="module")
def ad_10_1_3():
    return sc.build_adaptive_scheme(10, 1, 3, seed=0)


def test_adaptive_shape(ad_10_1_3):
    sch = ad_10_1_3
    inner = sch.inner
    assert (inner.t1, inner.t2) == (0, 3)
    assert (inner.alpha, inner.beta) == (7, 5)
    assert inner.m == 11
    assert sch.memory_length == 7 * inner.s


def test_adaptive_verify(ad_10_1_3):
    assert sc.verify_scheme(ad_10_1_3).ok


def test_adaptive_brute_queries(ad_10_1_3):
    sch = ad_10_1_3
    for S in [(), (0,), (9,)]:
        mem = sch.encode(S)
        assert [brute_adaptive_query(sch.inner, mem, u) for u in range(10)] == \
            [int(u in S) for u in range(10)]


def test_adaptive_with_nonadaptive_part():
    sch = sc.build_adaptive_scheme(6, 1, 5, seed=0)
    assert sch.inner.t1 == 1
    assert sc.verify_scheme(sch).ok


def test_adaptive_two_elements():
    sch = sc.build_adaptive_scheme(6, 2, 3, seed=0)
    assert sc.verify_scheme(sch).ok
