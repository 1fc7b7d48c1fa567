"""Short-cycle forcing for majority over a single array.

Each element is an edge between two of its probe locations; the third
location hangs off the edge. Short odd cycles, short even cycles whose
hanging vertices repeat, and pairs of such cycles meeting at a vertex
each make some small set unrepresentable. ``detect_forced`` runs a cycle
binning procedure and returns the first such configuration.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..boolfunc import MAJ
from ..probegraph import Cycle, LabeledGraph, find_short_cycle
from .probemap import Layout, ProbeMap
from .witness import Witness, WitnessKind


@dataclass(frozen=True)
class ModelGraph:
    s: int
    ends: tuple[tuple[int, int], ...]  # label -> endpoint pair
    third: tuple[int, ...]             # label -> hanging vertex

    @property
    def m(self) -> int:
        return len(self.ends)

    def as_graph(self) -> LabeledGraph:
        return LabeledGraph(self.s, tuple((a, b, u) for u, (a, b) in enumerate(self.ends)))


def build_model_graph(pm: ProbeMap) -> ModelGraph:
    if pm.layout is not Layout.SINGLE_ARRAY or pm.t != 3:
        raise ValueError("model graphs need three probes into a single array")
    if not pm.has_distinct_probes():
        raise ValueError("model graphs need three distinct locations per element")
    ends = tuple((int(a), int(b)) for a, b in zip(pm.x, pm.y))
    return ModelGraph(pm.s, ends, tuple(int(c) for c in pm.z))


@dataclass
class _Binned:
    cycle: Cycle
    third: dict[int, int]  # label -> hanging vertex when binned


def _alternate(cyc: Cycle) -> tuple[set[int], set[int]]:
    """Odd-position labels (1-based) and even-position labels."""
    return set(cyc.labels[0::2]), set(cyc.labels[1::2])


def _from_vertex(cyc: Cycle, v: int) -> Cycle:
    return cyc.rotate(cyc.vertices.index(v))


def _p1(c1: Cycle, c2: Cycle, n: int) -> Witness | None:
    shared = sorted(set(c1.vertices) & set(c2.vertices))
    if not shared:
        return None
    u0 = shared[0]
    a, b = _from_vertex(c1, u0), _from_vertex(c2, u0)
    s0 = set(a.labels[0::2]) | set(b.labels[1::2])
    s1 = set(a.labels[1::2]) | set(b.labels[0::2])
    cert = {"vertex": u0, "cycles": [_cycle_record(a), _cycle_record(b)]}
    return Witness(WitnessKind.FORCED_P1, MAJ, n, s0, s1, cert)


def _p2(c1: _Binned, c2: _Binned, n: int) -> Witness | None:
    for e in c1.cycle.labels:
        for f in c2.cycle.labels:
            if c1.third[e] == c2.third[f]:
                a, b = c1.cycle.starting_with(e), c2.cycle.starting_with(f)
                s0 = set(a.labels[0::2]) | set(b.labels[1::2])
                s1 = set(a.labels[1::2]) | set(b.labels[0::2])
                cert = {"vertex": c1.third[e],
                        "cycles": [_cycle_record(a), _cycle_record(b)]}
                return Witness(WitnessKind.FORCED_P2, MAJ, n, s0, s1, cert)
    return None


def _cycle_record(c: Cycle) -> dict:
    return {"vertices": list(c.vertices), "labels": list(c.labels)}


def _scan(odd: list[_Binned], even: list[_Binned], n: int) -> Witness | None:
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            w = _p1(odd[i].cycle, odd[j].cycle, n)
            if w is not None:
                return w
    for i in range(len(even)):
        for j in range(i + 1, len(even)):
            w = _p2(even[i], even[j], n)
            if w is not None:
                return w
    return None


def detect_forced(mg: ModelGraph, n: int, trace: list | None = None) -> Witness | None:
    """Bin short cycles until a forcing configuration appears.

    Cycles come from ``find_short_cycle`` (shortest first, lowest vertex on
    ties) with length at most ``n``. Odd cycles and even cycles with distinct
    hanging vertices are binned and removed. An even cycle with a repeated
    hanging vertex either gives a witness directly (even separation) or is
    rewired into a shorter odd cycle (odd separation). After every step the
    bins are scanned for two odd cycles sharing a vertex or two even cycles
    sharing a hanging vertex; the scan is guaranteed to succeed once the
    binned length exceeds ``2s``.
    """
    triples = [frozenset((a, b, c)) for (a, b), c in zip(mg.ends, mg.third)]
    ends = {u: tuple(e) for u, e in enumerate(mg.ends)}
    third = dict(enumerate(mg.third))
    odd: list[_Binned] = []
    even: list[_Binned] = []
    log = trace if trace is not None else []

    def bin_cycle(cyc: Cycle, target: list):
        target.append(_Binned(cyc, {u: third[u] for u in cyc.labels}))
        for u in cyc.labels:
            del ends[u]

    while True:
        w = _scan(odd, even, n)
        if w is not None:
            log.append(("end", w.kind.value))
            return w
        binned = sum(len(b.cycle) for b in odd + even)
        if binned > 2 * mg.s:
            raise AssertionError("binned length exceeds 2s without a meeting pair")
        graph = LabeledGraph(mg.s, tuple((a, b, u) for u, (a, b) in sorted(ends.items())))
        cyc = find_short_cycle(graph, n)
        if cyc is None:
            log.append(("end", "not_forced"))
            return None
        L = len(cyc)
        if L % 2:
            log.append(("odd", cyc.labels))
            bin_cycle(cyc, odd)
            continue
        hang = [third[u] for u in cyc.labels]
        pair = next(((i, j) for i in range(L) for j in range(i + 1, L) if hang[i] == hang[j]), None)
        if pair is None:
            log.append(("even", cyc.labels))
            bin_cycle(cyc, even)
            continue
        i, j = pair
        rot = cyc.rotate(i)
        if (j - i - 1) % 2 == 0:
            s0, s1 = _alternate(rot)
            cert = {"vertex": hang[i], "cycles": [_cycle_record(rot)], "pair": [rot.labels[0], cyc.labels[j]]}
            log.append(("end", "FORCED_P3"))
            return Witness(WitnessKind.FORCED_P3, MAJ, n, s0, s1, cert)
        # odd separation: hang both edges on the shared vertex instead
        k2 = j - i  # position of the partner in ``rot`` (0-based), even
        wv = hang[i]
        e1, e2 = rot.labels[0], rot.labels[k2]
        v = rot.vertices
        ends[e1], third[e1] = (v[1], wv), v[0]
        ends[e2], third[e2] = (v[k2], wv), v[(k2 + 1) % L]
        for u in (e1, e2):
            if frozenset(ends[u] + (third[u],)) != triples[u]:
                raise AssertionError("rewrite broke the probe triple")
        path = list(v[1:k2 + 1])  # v1 .. v_{2k}
        labels = list(rot.labels[1:k2])
        if wv in path:
            # the new closed walk revisits wv; keep its odd half
            p = path.index(wv)
            first = Cycle(tuple([wv] + path[:p]), tuple([e1] + labels[:p]))
            second = Cycle(tuple(path[p:]), tuple(labels[p:] + [e2]))
            new = first if len(first) % 2 else second
        else:
            new = Cycle(tuple([wv] + path), tuple([e1] + labels + [e2]))
        log.append(("rewire", new.labels))
        bin_cycle(new, odd)
