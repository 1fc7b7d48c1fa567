"""Impossibility witnesses and their independent checker.

A witness names two disjoint element sets ``s0`` and ``s1`` and claims no
memory answers 1 on all of ``s0`` and 0 on all of ``s1``. Since ``|s0| <= n``,
a valid scheme would have to represent ``s0`` itself, so the claim rules the
probe map out. The checker re-derives the claim by exhaustive search (or
propagation beyond the bit budget) and never trusts the certificate.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from ..config import Budget
from .probemap import ProbeMap
from .sat import find_memory


class WitnessKind(enum.Enum):
    FORCED_P1 = "FORCED_P1"
    FORCED_P2 = "FORCED_P2"
    FORCED_P3 = "FORCED_P3"
    DENSITY = "DENSITY"
    DEPENDENCY = "DEPENDENCY"
    RANK = "RANK"


class Verdict(enum.Enum):
    CONFIRMED = "confirmed"
    REFUTED = "refuted"


@dataclass(frozen=True)
class Witness:
    kind: WitnessKind
    table: int
    n: int
    s0: frozenset[int]
    s1: frozenset[int]
    certificate: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "s0", frozenset(int(u) for u in self.s0))
        object.__setattr__(self, "s1", frozenset(int(u) for u in self.s1))

    def swapped(self, table: int) -> Witness:
        """Witness for the complementary function: stored and excluded swap."""
        return Witness(self.kind, table, self.n, self.s1, self.s0,
                       {**self.certificate, "swapped": True})


def structurally_valid(w: Witness, m: int) -> bool:
    every = w.s0 | w.s1
    return (not (w.s0 & w.s1) and len(w.s0) <= w.n
            and all(0 <= u < m for u in every))


def check_witness(pm: ProbeMap, w: Witness, budget: Budget | None = None) -> Verdict:
    """CONFIRMED if no memory stores ``s0`` while excluding ``s1``.

    Rank witnesses additionally carry a polynomial identity that is
    re-verified. Raises ``Inconclusive`` when the search is too large and
    propagation is not enough.
    """
    if not structurally_valid(w, pm.m):
        return Verdict.REFUTED
    if w.kind is WitnessKind.RANK:
        from .degree import rank_identity_holds

        if not rank_identity_holds(pm, w):
            return Verdict.REFUTED
    mem = find_memory(pm, w.table, w.s0, w.s1, budget)
    return Verdict.CONFIRMED if mem is None else Verdict.REFUTED
