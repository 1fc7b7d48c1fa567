"""Explicit probe maps for small-instance experiments."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..boolfunc import find_transform
from ..probegraph import LabeledBipartiteGraph, make_rng


class Layout(enum.Enum):
    SINGLE_ARRAY = "single"
    THREE_ARRAYS = "three"  # one array per probe position (three when t = 3)


@dataclass(frozen=True, eq=False)
class ProbeMap:
    """Element ``u`` reads ``probes[u, i]`` for ``i < t``.

    With ``SINGLE_ARRAY`` every probe indexes one array of ``s`` bits; with
    ``THREE_ARRAYS`` probe ``i`` indexes its own array of ``s`` bits.
    """

    m: int
    s: int
    probes: np.ndarray
    layout: Layout = Layout.THREE_ARRAYS

    def __post_init__(self):
        p = np.asarray(self.probes, dtype=np.int64)
        if p.ndim != 2 or p.shape[0] != self.m:
            raise ValueError("probes must have shape (m, t)")
        if p.size and (p.min() < 0 or p.max() >= self.s):
            raise ValueError("probe location out of range")
        p.setflags(write=False)
        object.__setattr__(self, "probes", p)

    @property
    def t(self) -> int:
        return self.probes.shape[1]

    @property
    def x(self) -> np.ndarray:
        return self.probes[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.probes[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.probes[:, 2]

    @property
    def total_bits(self) -> int:
        return self.s if self.layout is Layout.SINGLE_ARRAY else self.t * self.s

    def locations(self) -> np.ndarray:
        """Global memory index of every probe, shape ``(m, t)``."""
        if self.layout is Layout.SINGLE_ARRAY:
            return self.probes.copy()
        return self.probes + self.s * np.arange(self.t, dtype=np.int64)[None, :]

    def has_distinct_probes(self) -> bool:
        loc = self.locations()
        return all(len(set(row)) == self.t for row in loc.tolist())

    def bipartite(self, a: int, b: int, elements=None) -> LabeledBipartiteGraph:
        """Graph with an edge ``probes[u, a] -- probes[u, b]`` labelled ``u``."""
        if self.layout is not Layout.THREE_ARRAYS:
            raise ValueError("bipartite views need separate arrays")
        els = range(self.m) if elements is None else sorted(elements)
        edges = tuple((int(self.probes[u, a]), int(self.probes[u, b]), int(u)) for u in els)
        return LabeledBipartiteGraph(self.s, self.s, edges)

    def __eq__(self, other):
        return (isinstance(other, ProbeMap) and self.m == other.m and self.s == other.s
                and self.layout is other.layout and np.array_equal(self.probes, other.probes))

    __hash__ = None


def random_probe_map(m: int, s: int, t: int = 3, layout: Layout = Layout.THREE_ARRAYS,
                     seed=0, distinct: bool = False) -> ProbeMap:
    rng = make_rng(seed)
    if distinct and layout is Layout.SINGLE_ARRAY:
        if s < t:
            raise ValueError("need s >= t for distinct probes")
        probes = np.stack([rng.choice(s, size=t, replace=False) for _ in range(m)])
    else:
        probes = rng.integers(0, s, size=(m, t))
    return ProbeMap(m, s, probes.reshape(m, t), layout)


def transform_map(pm: ProbeMap, perm, mask: int) -> ProbeMap:
    """Map ``pm2`` such that ``f`` on ``pm2`` behaves like
    ``apply_transform(f, perm, mask)`` on ``pm`` up to a memory bijection.

    Negating probe ``i`` complements array ``i``, which is a bijection only
    with separate arrays, or in a single array when every probe is negated.
    """
    if pm.t != 3:
        raise ValueError("transforms act on three-probe maps")
    if pm.layout is Layout.SINGLE_ARRAY and mask not in (0, 0b111):
        raise ValueError("partial negation needs separate arrays")
    return ProbeMap(pm.m, pm.s, pm.probes[:, list(perm)], pm.layout)


def reduce_to(pm: ProbeMap, table: int, targets) -> tuple[ProbeMap, int] | None:
    """Rewrite ``(pm, table)`` as an equivalent ``(pm2, target)`` for some
    ``target`` in ``targets``; None if no admissible transform exists."""
    from ..boolfunc import TRANSFORMS, apply_transform

    for target in targets:
        if find_transform(target, table) is None:
            continue
        for perm, mask in sorted(TRANSFORMS, key=lambda tr: (tr[1] != 0, tr[1], tr[0])):
            if apply_transform(target, perm, mask) != table:
                continue
            try:
                return transform_map(pm, perm, mask), target
            except ValueError:
                continue
    return None
