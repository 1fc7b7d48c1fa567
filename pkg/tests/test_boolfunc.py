from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from bitprobe import boolfunc as bf
from bitprobe.boolfunc import Strategy


def brute_eval(table, v):
    return (table >> (4 * v[0] + 2 * v[1] + v[2])) & 1


def brute_orbit(table):
    """Orbit under input permutations and negations, built from scratch."""
    out = set()
    for perm in permutations(range(3)):
        for neg in product((0, 1), repeat=3):
            g = 0
            for v in product((0, 1), repeat=3):
                w = tuple(v[perm[i]] ^ neg[i] for i in range(3))
                if brute_eval(table, w):
                    g |= 1 << (4 * v[0] + 2 * v[1] + v[2])
            out.add(g)
    return out


def brute_height(assign, free=(0, 1, 2)):
    """Minimum decision-tree depth of a partial function given as {input: bit}."""
    if len(set(assign.values())) <= 1:
        return 0
    best = len(free)
    for i in free:
        rest = tuple(j for j in free if j != i)
        parts = [{v: b for v, b in assign.items() if v[i] == c} for c in (0, 1)]
        best = min(best, 1 + max(brute_height(p, rest) for p in parts))
    return best


def height_of(table):
    return brute_height({v: brute_eval(table, v) for v in product((0, 1), repeat=3)})


def brute_partition():
    seen, classes = set(), []
    for f in range(256):
        if f not in seen:
            orb = brute_orbit(f)
            seen |= orb
            classes.append(orb)
    return classes


def test_twenty_two_classes():
    classes = bf.all_classes()
    assert len(classes) == 22
    assert sum(fc.class_size for fc in classes) == 256
    assert len(brute_partition()) == 22


def test_classes_match_brute_orbits():
    for orb in brute_partition():
        ids = {bf.classify(f).class_id for f in orb}
        assert len(ids) == 1
        fc = bf.classify(next(iter(orb)))
        assert fc.class_size == len(orb)
        assert fc.canonical_table == min(orb)


def test_height_two_list():
    low = {fc.name for fc in bf.height2_classes()}
    assert low == {"ZERO", "ONE", "DICTATOR", "AND2", "NAND2", "MUX", "XNOR2"}
    for fc in bf.all_classes():
        assert (fc.strategy is Strategy.HEIGHT2) == (height_of(fc.canonical_table) <= 2)


@pytest.mark.parametrize("f", range(256))
def test_height_matches_brute(f):
    assert bf.decision_tree_height(f) == height_of(f)


@pytest.mark.parametrize("name,table", [
    ("ZERO", 0x00), ("ONE", 0xFF), ("DICTATOR", 0xF0), ("AND2", 0xC0), ("NAND2", 0x3F),
    ("MUX", 0xCA), ("XNOR2", 0xC3), ("MAJORITY", 0xE8), ("AND3", 0x80), ("NAND3", 0x7F),
    ("XOR_AND", 0x28), ("NOT_XOR_AND", 0xD7), ("OR_AND", 0xA8), ("NOT_OR_AND", 0x57),
    ("ALL_EQUAL", 0x81), ("NOT_ALL_EQUAL", 0x7E), ("ALL_OR_YZ_ZERO", 0x91),
    ("NOT_ALL_OR_YZ_ZERO", 0x6E), ("PARITY", 0x96), ("SUM_NE_1", 0xE9),
    ("XY_XOR_Z", 0x6A), ("SUM_EQ_1", 0x16),
])
def test_representative_tables(name, table):
    assert bf.REPRESENTATIVES[name][0] == table
    assert bf.classify(table).name == name


@pytest.mark.parametrize("name,strategy,size", [
    ("MAJORITY", Strategy.MAJORITY_MODEL_GRAPH, 8),
    ("PARITY", Strategy.DIMENSION, 2),
    ("SUM_NE_1", Strategy.DIMENSION, 8),
    ("XY_XOR_Z", Strategy.DEGREE, 24),
    ("SUM_EQ_1", Strategy.DEGREE, 8),
    ("ALL_EQUAL", Strategy.DENSITY, 4),
])
def test_strategy_and_size(name, strategy, size):
    fc = bf.classify(bf.REPRESENTATIVES[name][0])
    assert fc.strategy is strategy
    assert fc.class_size == size


def test_strategy_counts():
    counts = {}
    for fc in bf.all_classes():
        counts[fc.strategy] = counts.get(fc.strategy, 0) + 1
    assert counts == {Strategy.HEIGHT2: 7, Strategy.MAJORITY_MODEL_GRAPH: 1,
                      Strategy.DENSITY: 10, Strategy.DIMENSION: 2, Strategy.DEGREE: 2}


@pytest.mark.parametrize("a,b", bf.COMPLEMENT_PAIRS)
def test_complement_pairs(a, b):
    assert bf.REPRESENTATIVES[a][0] ^ 0xFF == bf.REPRESENTATIVES[b][0]


def test_output_negation_not_in_group():
    # AND3 and NAND3 are distinct classes
    assert bf.classify(0x80).class_id != bf.classify(0x7F).class_id


@given(st.integers(0, 255), st.permutations(range(3)), st.integers(0, 7))
def test_transform_stays_in_orbit(f, perm, mask):
    g = bf.apply_transform(f, perm, mask)
    assert g in brute_orbit(f)
    assert bf.classify(g).class_id == bf.classify(f).class_id


@given(st.integers(0, 255), st.permutations(range(3)), st.integers(0, 7))
def test_find_transform_roundtrip(f, perm, mask):
    g = bf.apply_transform(f, perm, mask)
    tr = bf.find_transform(f, g)
    assert tr is not None
    assert bf.apply_transform(f, *tr) == g


@given(st.integers(0, 255), st.integers(0, 2), st.integers(0, 1))
def test_restrict_against_brute(f, var, val):
    g = bf.restrict(f, var, val)
    for v in product((0, 1), repeat=3):
        w = list(v)
        w[var] = val
        assert brute_eval(g, v) == brute_eval(f, w)


@given(st.integers(0, 255))
def test_hex_roundtrip(f):
    assert bf.parse_hex(bf.to_hex(f)) == f
    assert bf.QueryFunction3.from_hex(bf.to_hex(f)).truth_table == f


@pytest.mark.parametrize("bad", ["", "G0", "123", "0x"])
def test_parse_hex_rejects(bad):
    with pytest.raises(ValueError):
        bf.parse_hex(bad)


def test_evaluate_bit_order():
    # bit index 4x + 2y + z
    for v in product((0, 1), repeat=3):
        assert bf.evaluate(0xE8, *v) == int(sum(v) >= 2)
    assert bf.evaluate(1 << 6, 1, 1, 0) == 1
