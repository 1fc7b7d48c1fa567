import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bitprobe import schemes as sc
from bitprobe.errors import FormatError
from bitprobe.fileformats import (bits_to_hex, hex_to_bits, memory_to_text, parse_memory,
                                  parse_scheme, parse_witness, probe_map_to_text,
                                  scheme_fingerprint, scheme_to_text, witness_to_text)
from bitprobe.lowerlab import Layout, ProbeMap, Witness, WitnessKind, random_probe_map


@pytest.fixture(scope="module")
def schemes():
    return {
        "grid": sc.grid_scheme_n1(10),
        "characteristic": sc.characteristic_scheme(5),
        "nonadaptive": sc.build_nonadaptive_scheme(12, 1, 5, seed=1),
        "adaptive": sc.build_adaptive_scheme(6, 1, 5, seed=0),
    }


def same_answers(a, b, sets):
    for S in sets:
        if a.encode(S) != b.encode(S):
            return False
        if a.query_all(a.encode(S)).tolist() != b.query_all(b.encode(S)).tolist():
            return False
    return True


@pytest.mark.parametrize("kind", ["grid", "characteristic", "nonadaptive", "adaptive"])
def test_scheme_roundtrip(schemes, kind):
    sch = schemes[kind]
    text = scheme_to_text(sch)
    back = parse_scheme(text)
    assert type(back) is type(sch)
    assert scheme_to_text(back) == text
    assert scheme_fingerprint(back) == scheme_fingerprint(sch)
    assert same_answers(sch, back, [(), (0,), (sch.m - 1,)])


def test_scheme_report_survives(schemes):
    sch = schemes["nonadaptive"]
    assert parse_scheme(scheme_to_text(sch)).report == sch.report


def test_fingerprint_changes_with_content(schemes):
    a = schemes["grid"]
    b = sc.grid_scheme_n1(11)
    assert scheme_fingerprint(a) != scheme_fingerprint(b)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.integers(1, 4),
       st.sampled_from(list(Layout)), st.integers(0, 10**6), st.one_of(st.none(), st.integers(0, 255)))
def test_probe_map_roundtrip(m, s, t, layout, seed, table):
    pm = random_probe_map(m, s, t, layout, seed=seed)
    if table is not None:
        table &= (1 << (1 << t)) - 1
    text = probe_map_to_text(pm, table)
    back, tab = parse_scheme(text)
    assert back == pm
    assert tab == table


@given(st.lists(st.integers(0, 1), max_size=70))
def test_bits_hex_roundtrip(bits):
    arr = np.array(bits, dtype=np.uint8)
    text = bits_to_hex(arr)
    assert len(text) == (len(bits) + 3) // 4
    assert hex_to_bits(text, len(bits)).tolist() == bits


def test_hex_is_msb_first():
    assert bits_to_hex(np.array([1, 0, 0, 0, 1], dtype=np.uint8)) == "88"
    assert hex_to_bits("88", 5).tolist() == [1, 0, 0, 0, 1]


def test_hex_padding_must_be_zero():
    with pytest.raises(ValueError):
        hex_to_bits("8C", 5)
    with pytest.raises(ValueError):
        hex_to_bits("8", 5)
    with pytest.raises(FormatError) as exc:
        parse_memory("bitprobe-memory 1\nlength=5\nscheme=00\nbits=8C\n")
    assert exc.value.line == 4


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 9), max_size=1))
def test_memory_roundtrip(S):
    sch = sc.grid_scheme_n1(10)
    mem = sch.encode(S)
    fp = scheme_fingerprint(sch)
    back, fp2 = parse_memory(memory_to_text(mem, fp))
    assert back == mem and fp2 == fp


def test_memory_length_mismatch():
    text = "bitprobe-memory 1\nlength=9\nscheme=00\nbits=FF\n"
    with pytest.raises(FormatError) as exc:
        parse_memory(text)
    assert exc.value.line is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6), st.data())
def test_witness_roundtrip(m, seed, data):
    pm = random_probe_map(m, 3, 3, Layout.THREE_ARRAYS, seed=seed)
    s0 = data.draw(st.sets(st.integers(0, m - 1), max_size=2))
    s1 = data.draw(st.sets(st.integers(0, m - 1))) - s0
    kind = data.draw(st.sampled_from(list(WitnessKind)))
    w = Witness(kind, 0x80, 2, s0, s1, {"note": "x", "cycles": [[0, 1]]})
    back, pm2 = parse_witness(witness_to_text(w, pm))
    assert back == w
    assert back.certificate == w.certificate
    assert pm2 == pm


# ------------------------------------------------------------ negative paths

GRID = sc.grid_scheme_n1(4)


def grid_text():
    return scheme_to_text(GRID)


def line_of(text, needle):
    return next(i for i, ln in enumerate(text.splitlines(), 1) if ln == needle)


def test_location_out_of_range_line():
    text = grid_text()
    no = line_of(text, "2 2")
    bad = text.replace("\n2 2\n", "\n2 7\n")
    with pytest.raises(FormatError) as exc:
        parse_scheme(bad)
    assert exc.value.line == no


@pytest.mark.parametrize("mutate,line", [
    (lambda t: "bitprobe-scheme 9\n" + t.split("\n", 1)[1], 1),
    (lambda t: t.replace("m=4", "m=four"), 3),
    (lambda t: t.replace("kind=grid", "kind=spiral"), 2),
])
def test_header_errors(mutate, line):
    with pytest.raises(FormatError) as exc:
        parse_scheme(mutate(grid_text()))
    assert exc.value.line == line


def test_zero_location_rejected():
    text = grid_text().replace("\n1 1\n", "\n0 1\n")
    with pytest.raises(FormatError):
        parse_scheme(text)


def test_missing_end():
    with pytest.raises(FormatError):
        parse_scheme(grid_text().replace("end\n", ""))


def test_wrong_row_count():
    text = grid_text()
    rows = text.splitlines()
    del rows[line_of(text, "2 2") - 1]
    with pytest.raises(FormatError):
        parse_scheme("\n".join(rows) + "\n")


def test_comments_ignored():
    text = grid_text().replace("probes\n", "# a comment\nprobes\n")
    assert scheme_to_text(parse_scheme(text)) == grid_text()


def test_witness_element_out_of_range():
    pm = ProbeMap(3, 2, np.zeros((3, 3), dtype=int), Layout.THREE_ARRAYS)
    text = witness_to_text(Witness(WitnessKind.DENSITY, 0x80, 2, {0}, {1}), pm)
    bad = text.replace("s1=2", "s1=7")
    with pytest.raises(FormatError) as exc:
        parse_witness(bad)
    assert exc.value.line == line_of(text, "s1=2")
