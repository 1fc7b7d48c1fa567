"""Small-set witnesses for the five complementary pairs of sparse/dense
query functions over three separate arrays.

Each finder works on the pair's first member and returns ``(S, T)`` with
``|S|, |T| <= n`` such that no memory answers 1 on ``S`` and 0 on ``T``;
for the complementary function the two sets swap roles.
"""
from __future__ import annotations

from collections import defaultdict

from ..boolfunc import COMPLEMENT_PAIRS, REPRESENTATIVES, Strategy, classify
from ..errors import WrongStrategy
from ..probegraph import find_short_cycle, shortest_cycle_through
from .probemap import Layout, ProbeMap, reduce_to
from .witness import Witness, WitnessKind

X, Y, Z = 0, 1, 2


def _partners(pm: ProbeMap, coord: int) -> dict[int, list[int]]:
    groups = defaultdict(list)
    for u in range(pm.m):
        groups[int(pm.probes[u, coord])].append(u)
    return groups


def _no_private(pm: ProbeMap, coord: int) -> list[int]:
    groups = _partners(pm, coord)
    return [u for u in range(pm.m) if len(groups[int(pm.probes[u, coord])]) > 1]


def _other(groups, key, u):
    return next(v for v in groups[key] if v != u)


def and_pair(pm: ProbeMap, n: int):
    """An element with no private location in any array."""
    groups = [_partners(pm, c) for c in range(3)]
    for u in range(pm.m):
        if all(len(groups[c][int(pm.probes[u, c])]) > 1 for c in range(3)):
            S = {_other(groups[c], int(pm.probes[u, c]), u) for c in range(3)}
            if len(S) <= n:
                return S, {u}, {"element": u}
    return None


def _cycles_of(graph, max_len):
    """Edge-disjoint short cycles, shortest first, removing each as found."""
    while True:
        cyc = find_short_cycle(graph, max_len)
        if cyc is None:
            return
        yield cyc
        graph = graph.restricted(set(graph.labels()) - set(cyc.labels))


def xor_and_pair(pm: ProbeMap, n: int):
    """An even cycle in the x/y graph of elements sharing their z location."""
    E = _no_private(pm, Z)
    zgroups = _partners(pm, Z)
    graph = pm.bipartite(X, Y, E)
    for cyc in _cycles_of(graph, n):
        u1 = cyc.labels[0]
        v = _other(zgroups, int(pm.z[u1]), u1)
        S = {v} | set(cyc.labels[1:])
        if u1 not in S and len(S) <= n:
            return S, {u1}, {"cycles": [list(cyc.labels)], "partner": v}
    return None


def or_and_pair(pm: ProbeMap, n: int):
    """Reserved z-partners plus three unreserved elements sharing x and y."""
    E = _no_private(pm, Z)
    byz = defaultdict(list)
    for u in E:
        byz[int(pm.z[u])].append(u)
    partner = {}
    for loc in sorted(byz):
        group = sorted(byz[loc])
        for a, b in zip(group[0::2], group[1::2]):
            partner[a] = b
    free = sorted(partner)
    for u in range(pm.m):
        for v in free:
            if v == u or pm.x[v] != pm.x[u]:
                continue
            for w in free:
                if w == u or pm.y[w] != pm.y[u]:
                    continue
                S = {u, partner[v], partner[w]}
                if len(S) <= n and not S & {v, w}:
                    return S, {v, w}, {"u": u, "v": v, "w": w,
                                       "partners": [partner[v], partner[w]]}
    return None


def all_equal_pair(pm: ProbeMap, n: int):
    """Cycles through one element in both the x/y and the y/z graphs."""
    gxy = pm.bipartite(X, Y)
    gyz = pm.bipartite(Y, Z)
    half = n // 2
    for u in range(pm.m):
        c1 = shortest_cycle_through(gxy, u, half)
        if c1 is None:
            continue
        c2 = shortest_cycle_through(gyz, u, half)
        if c2 is None:
            continue
        S = (set(c1.labels) | set(c2.labels)) - {u}
        return S, {u}, {"cycles": [list(c1.labels), list(c2.labels)], "element": u}
    return None


def all_or_yz_zero_pair(pm: ProbeMap, n: int):
    """Short cycles in the y/z graph tied together through shared x locations."""
    half = n // 2
    graph = pm.bipartite(Y, Z)
    found = []
    for cyc in _cycles_of(graph, half):
        labs = list(cyc.labels)
        for i, a in enumerate(labs):
            for b in labs[i + 1:]:
                if pm.x[a] == pm.x[b]:
                    S = set(labs) - {a}
                    return S, {a}, {"cycles": [labs], "pair": [a, b]}
        for prev in found:
            for uk in prev:
                for v1 in labs:
                    if pm.x[uk] == pm.x[v1]:
                        u1 = next(u for u in prev if u != uk)
                        S = (set(prev) - {u1}) | (set(labs) - {v1})
                        return S, {u1, v1}, {"cycles": [prev, labs], "pair": [uk, v1]}
        if len(labs) >= 2:
            found.append(labs)
    return None


_FINDERS = {
    "AND3": and_pair,
    "XOR_AND": xor_and_pair,
    "OR_AND": or_and_pair,
    "ALL_EQUAL": all_equal_pair,
    "ALL_OR_YZ_ZERO": all_or_yz_zero_pair,
}


def density_witness(pm: ProbeMap, table: int, n: int) -> Witness | None:
    """Witness for any function in one of the ten sparse/dense classes."""
    fc = classify(table)
    if fc.strategy is not Strategy.DENSITY:
        raise WrongStrategy(f"{fc.name} is handled by {fc.strategy.value}")
    if pm.layout is not Layout.THREE_ARRAYS or pm.t != 3:
        raise ValueError("density witnesses need three separate arrays")
    names = {REPRESENTATIVES[a][0]: (a, False) for a, _ in COMPLEMENT_PAIRS}
    names.update({REPRESENTATIVES[b][0]: (a, True) for a, b in COMPLEMENT_PAIRS})
    reduced = reduce_to(pm, table, [fc.representative])
    if reduced is None:
        return None
    pm2, rep = reduced
    base, complemented = names[rep]
    res = _FINDERS[base](pm2, n)
    if res is None:
        return None
    S, T, cert = res
    if complemented:
        S, T = T, S
    cert = {**cert, "finder": base, "complemented": complemented}
    return Witness(WitnessKind.DENSITY, table, n, S, T, cert)
