"""Plain-text formats for schemes, memories and witnesses.

All three are line oriented: a magic line, ``key=value`` header lines, and
for schemes and probe maps a ``probes`` section with one element per line
(whitespace-separated 1-based location indices) closed by ``end``. Element
ids in witness sets are 1-based as well. ``#`` starts a comment. Parse
errors raise ``FormatError`` with the offending line number.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import FormatError
from .lowerlab.probemap import Layout, ProbeMap
from .lowerlab.witness import Witness, WitnessKind
from .probegraph import AdaptiveProbeGraph, NonAdaptiveProbeGraph
from .schemes import (AdaptiveScheme, AdmissibilityReport, GridScheme, Memory,
                      NonAdaptiveScheme, PaddedScheme, table_hex)

SCHEME_MAGIC = "bitprobe-scheme 1"
MEMORY_MAGIC = "bitprobe-memory 1"
WITNESS_MAGIC = "bitprobe-witness 1"

_REPORT_KEYS = ("r_max", "factor", "overlap_bound", "survivor_bound", "max_overlap",
                "max_survivors", "max_survivors_plus", "seed", "retries")


# ------------------------------------------------------------------ writing

def _report_lines(rep: AdmissibilityReport | None) -> list[str]:
    if rep is None:
        return []
    out = []
    for key in _REPORT_KEYS:
        val = getattr(rep, key)
        if val is not None:
            out.append(f"{key}={val}")
    return out


def _body(rows: np.ndarray) -> list[str]:
    return ["probes"] + [" ".join(str(int(v) + 1) for v in row) for row in rows] + ["end"]


def scheme_to_text(sch) -> str:
    if isinstance(sch, PaddedScheme):
        inner = sch.inner
        lines = [SCHEME_MAGIC, "kind=adaptive", f"m={sch.m}", f"universe={inner.m}",
                 f"n={inner.n}", f"t1={inner.t1}", f"t2={inner.t2}", f"s={inner.s}",
                 "layout=blocks"]
        lines += _report_lines(inner.report)
        rows = np.concatenate([inner.g1.neighbor, inner.g2.neighbor], axis=1)
        lines += _body(rows)
    elif isinstance(sch, NonAdaptiveScheme):
        lines = [SCHEME_MAGIC, f"kind={sch.kind}", f"m={sch.m}", f"n={sch.n}", f"t={sch.t}",
                 f"s={sch.s}", f"query={table_hex(sch.query_table, sch.t)}", "layout=blocks"]
        lines += _report_lines(sch.report)
        lines += _body(sch.graph.neighbor)
    else:
        raise TypeError(f"cannot serialise {type(sch).__name__}")
    return "\n".join(lines) + "\n"


def probe_map_to_text(pm: ProbeMap, table: int | None = None) -> str:
    kind = "probe-map-3" if pm.t == 3 else "probe-map"
    lines = [SCHEME_MAGIC, f"kind={kind}", f"m={pm.m}", f"t={pm.t}", f"s={pm.s}",
             f"layout={pm.layout.value}"]
    if table is not None:
        lines.append(f"query={table_hex(table, pm.t)}")
    lines += _body(pm.probes)
    return "\n".join(lines) + "\n"


def fingerprint(text: str) -> str:
    """64-bit hash of a canonical serialisation."""
    return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


def scheme_fingerprint(sch) -> str:
    return fingerprint(scheme_to_text(sch))


def bits_to_hex(bits: np.ndarray) -> str:
    bits = np.asarray(bits, dtype=np.uint8)
    pad = (-len(bits)) % 4
    padded = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    nibbles = padded.reshape(-1, 4) @ np.array([8, 4, 2, 1])
    return "".join(f"{int(v):X}" for v in nibbles)


def hex_to_bits(text: str, length: int) -> np.ndarray:
    if len(text) != (length + 3) // 4:
        raise ValueError(f"expected {(length + 3) // 4} hex digits, got {len(text)}")
    vals = [int(ch, 16) for ch in text]
    bits = np.array([(v >> (3 - i)) & 1 for v in vals for i in range(4)], dtype=np.uint8)
    if bits[length:].any():
        raise ValueError("padding bits must be zero")
    return bits[:length]


def memory_to_text(mem: Memory, scheme_fp: str) -> str:
    return "\n".join([MEMORY_MAGIC, f"length={len(mem)}", f"scheme={scheme_fp}",
                      f"bits={bits_to_hex(mem.bits)}"]) + "\n"


def _set_text(S) -> str:
    return " ".join(str(u + 1) for u in sorted(S))


def witness_to_text(w: Witness, pm: ProbeMap) -> str:
    lines = [WITNESS_MAGIC, f"kind={w.kind.value}", f"function={table_hex(w.table, pm.t)}",
             f"n={w.n}", f"s0={_set_text(w.s0)}", f"s1={_set_text(w.s1)}",
             "certificate=" + json.dumps(w.certificate, sort_keys=True, default=str), "map"]
    return "\n".join(lines) + "\n" + probe_map_to_text(pm)


def write_text(path, text: str) -> None:
    Path(path).write_text(text)


# ------------------------------------------------------------------ parsing

def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


class _Header:
    def __init__(self):
        self.values: dict[str, tuple[str, int]] = {}

    def add(self, line: str, no: int):
        key, sep, val = line.partition("=")
        if not sep:
            raise FormatError(f"expected key=value, got {line!r}", no)
        key = key.strip()
        if key in self.values:
            raise FormatError(f"duplicate key {key!r}", no)
        self.values[key] = (val.strip(), no)

    def raw(self, key, default=None):
        if key not in self.values:
            if default is not None:
                return default, None
            raise FormatError(f"missing header key {key!r}")
        return self.values[key]

    def int(self, key, lo=0, hi=None, default=None):
        val, no = self.raw(key, None if default is None else str(default))
        try:
            out = int(val)
        except ValueError:
            raise FormatError(f"{key} must be an integer, got {val!r}", no) from None
        if out < lo or (hi is not None and out > hi):
            raise FormatError(f"{key}={out} out of range", no)
        return out

    def optional(self, key):
        return self.values.get(key, (None, None))[0]


def _parse_sections(text: str, magic: str):
    it = iter(list(_lines(text)))
    first = next(it, None)
    if first is None or first[1] != magic:
        raise FormatError(f"expected first line {magic!r}", first[0] if first else 1)
    header = _Header()
    rows: list[tuple[int, list[str]]] = []
    state = "header"
    last = first[0]
    for no, line in it:
        last = no
        if state == "header":
            if line == "probes":
                state = "body"
            else:
                header.add(line, no)
        elif state == "body":
            if line == "end":
                state = "done"
            else:
                rows.append((no, line.split()))
        else:
            raise FormatError("content after 'end'", no)
    return header, rows, state, last


def _probe_rows(rows, count, width, limits, last_line):
    if len(rows) != count:
        where = rows[count][0] if len(rows) > count else last_line
        raise FormatError(f"expected {count} probe lines, found {len(rows)}", where)
    out = np.zeros((count, width), dtype=np.int64)
    for i, (no, fields) in enumerate(rows):
        if len(fields) != width:
            raise FormatError(f"expected {width} indices, found {len(fields)}", no)
        for j, tok in enumerate(fields):
            try:
                v = int(tok)
            except ValueError:
                raise FormatError(f"bad location index {tok!r}", no) from None
            if not 1 <= v <= limits[j]:
                raise FormatError(f"location {v} outside [1, {limits[j]}]", no)
            out[i, j] = v - 1
    return out


def _parse_report(header: _Header) -> AdmissibilityReport | None:
    if header.optional("r_max") is None:
        return None
    kw = {}
    for key in _REPORT_KEYS:
        val = header.optional(key)
        if val is None:
            continue
        no = header.values[key][1]
        try:
            kw[key] = Fraction(val) if key in ("factor", "survivor_bound") else int(val)
        except ValueError:
            raise FormatError(f"bad value for {key}", no) from None
    kw.setdefault("factor", Fraction(1))
    return AdmissibilityReport(**kw)


def parse_scheme(text: str):
    """Parse a scheme or probe-map file.

    Returns a scheme object, or ``(ProbeMap, table_or_None)`` for probe maps.
    """
    header, rows, state, last = _parse_sections(text, SCHEME_MAGIC)
    if state != "done":
        raise FormatError("missing 'probes' section or closing 'end'", last)
    kind, kind_line = header.raw("kind")
    if kind in ("nonadaptive", "grid", "characteristic"):
        m = header.int("m", 1)
        t = header.int("t", 1, 16)
        s = header.int("s", 1)
        n = header.int("n", 0, m)
        table = _parse_table(header, t)
        nb = _probe_rows(rows, m, t, [s] * t, last)
        graph = NonAdaptiveProbeGraph(m, t, s, nb)
        rep = _parse_report(header)
        if kind == "grid":
            return GridScheme(m, n, graph, table, rep)
        return NonAdaptiveScheme(m, n, graph, table, rep, kind=kind)
    if kind == "adaptive":
        m = header.int("m", 1)
        n = header.int("n", 1, m)
        universe = header.int("universe", m + n, m + n)
        t1 = header.int("t1", 0, 8)
        t2 = header.int("t2", 1, 8)
        s = header.int("s", 1)
        width = t1 + (1 << t2) - 1
        nb = _probe_rows(rows, universe, width, [s] * width, last)
        g1 = NonAdaptiveProbeGraph(universe, t1, s, nb[:, :t1])
        g2 = AdaptiveProbeGraph(universe, t2, s, nb[:, t1:])
        return PaddedScheme(m, AdaptiveScheme(universe, n, g1, g2, _parse_report(header)))
    if kind in ("probe-map-3", "probe-map"):
        m = header.int("m", 1)
        t = header.int("t", 1, 8, default=3)
        if kind == "probe-map-3" and t != 3:
            raise FormatError("probe-map-3 needs t=3", header.values["t"][1])
        s = header.int("s", 1)
        lay, lay_no = header.raw("layout", "single")
        try:
            layout = Layout(lay)
        except ValueError:
            raise FormatError(f"unknown layout {lay!r}", lay_no) from None
        table = _parse_table(header, t) if header.optional("query") is not None else None
        probes = _probe_rows(rows, m, t, [s] * t, last)
        return ProbeMap(m, s, probes, layout), table
    raise FormatError(f"unknown kind {kind!r}", kind_line)


def _parse_table(header: _Header, t: int) -> int:
    val, no = header.raw("query")
    try:
        table = int(val, 16)
    except ValueError:
        raise FormatError(f"bad query table {val!r}", no) from None
    if table >> (1 << t):
        raise FormatError(f"query table {val} too wide for t={t}", no)
    return table


def parse_memory(text: str) -> tuple[Memory, str]:
    header, rows, state, last = _parse_sections(text, MEMORY_MAGIC)
    if rows or state != "header":
        raise FormatError("memory files have no probes section", last)
    length = header.int("length", 0)
    fp, _ = header.raw("scheme")
    bits_hex, no = header.raw("bits", "" if length == 0 else None)
    try:
        bits = hex_to_bits(bits_hex, length)
    except ValueError as exc:
        raise FormatError(str(exc), no) from None
    return Memory(bits), fp


def _parse_set(val: str, no: int, m: int) -> set[int]:
    out = set()
    for tok in val.split():
        try:
            u = int(tok)
        except ValueError:
            raise FormatError(f"bad element {tok!r}", no) from None
        if not 1 <= u <= m:
            raise FormatError(f"element {u} outside [1, {m}]", no)
        out.add(u - 1)
    return out


def parse_witness(text: str) -> tuple[Witness, ProbeMap]:
    lines = text.splitlines()
    try:
        split = next(i for i, line in enumerate(lines) if line.strip() == "map")
    except StopIteration:
        raise FormatError("missing 'map' section", len(lines)) from None
    head_text = "\n".join(lines[:split])
    try:
        parsed = parse_scheme("\n".join(lines[split + 1:]))
    except FormatError as exc:
        raise FormatError(str(exc).split(": ", 1)[-1], (exc.line or 0) + split + 1) from None
    if not isinstance(parsed, tuple):
        raise FormatError("witness map must be a probe map", split + 2)
    pm, _ = parsed
    header, rows, state, last = _parse_sections(head_text, WITNESS_MAGIC)
    try:
        kind = WitnessKind(header.raw("kind")[0])
    except ValueError:
        raise FormatError("unknown witness kind", header.values["kind"][1]) from None
    fval, fno = header.raw("function")
    try:
        table = int(fval, 16)
    except ValueError:
        raise FormatError(f"bad function {fval!r}", fno) from None
    n = header.int("n", 0, pm.m)
    s0 = _parse_set(header.optional("s0") or "", header.values.get("s0", (0, None))[1], pm.m)
    s1 = _parse_set(header.optional("s1") or "", header.values.get("s1", (0, None))[1], pm.m)
    cval, cno = header.raw("certificate", "{}")
    try:
        cert = json.loads(cval)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad certificate JSON: {exc.msg}", cno) from None
    return Witness(kind, table, n, s0, s1, cert), pm


def read_text(path) -> str:
    return Path(path).read_text()
