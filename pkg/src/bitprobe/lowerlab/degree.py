"""Rank witnesses for the two classes handled by polynomial degree.

If a probe map supports every ``n``-set, the polynomials ``P_S`` are
linearly independent. A non-trivial combination summing to zero therefore
shows some set in its support cannot be stored; the finder names one.
"""
from __future__ import annotations

import math
from itertools import combinations

from .. import polyalg as pa
from ..boolfunc import REPRESENTATIVES, Strategy, classify
from ..config import Budget
from ..errors import WrongStrategy
from .probemap import ProbeMap, reduce_to
from .sat import satisfiable_for_set
from .witness import Witness, WitnessKind


def _kinds() -> dict:
    # resolved on use: polyalg imports this package
    return {
        REPRESENTATIVES["XY_XOR_Z"][0]: pa.PolyKind.XY_PLUS_Z,
        REPRESENTATIVES["SUM_EQ_1"][0]: pa.PolyKind.SUM_EQ_1,
    }


def _reduced(pm: ProbeMap, table: int):
    fc = classify(table)
    if fc.strategy is not Strategy.DEGREE:
        raise WrongStrategy(f"{fc.name} is handled by {fc.strategy.value}")
    reduced = reduce_to(pm, table, [fc.representative])
    if reduced is None:
        raise ValueError("this class member needs separate arrays")
    pm2, rep = reduced
    return pm2, _kinds()[rep]


def poly_kind(table: int) -> pa.PolyKind:
    fc = classify(table)
    if fc.strategy is not Strategy.DEGREE:
        raise WrongStrategy(f"{fc.name} is handled by {fc.strategy.value}")
    return _kinds()[fc.representative]


def degree_witness(pm: ProbeMap, table: int, n: int, budget: Budget | None = None) -> Witness | None:
    pm2, kind = _reduced(pm, table)
    sets = list(combinations(range(pm.m), n))
    polys = [pa.build_PS(pm2, kind, S) for S in sets]
    alpha = pa.left_kernel_vector(pa.coefficient_rows(polys), kind.field)
    if alpha is None:
        return None
    support = [(S, a) for S, a in zip(sets, alpha) if a]
    for S, _ in support:
        if satisfiable_for_set(pm, table, S, budget) is None:
            cert = {"field": kind.field, "kind": kind.value,
                    "coefficients": [[list(T), int(a)] for T, a in support],
                    "sets": math.comb(pm.m, n)}
            return Witness(WitnessKind.RANK, table, n, S, set(range(pm.m)) - set(S), cert)
    raise AssertionError("dependent polynomials but every set in the support is storable")


def rank_identity_holds(pm: ProbeMap, w: Witness) -> bool:
    """Recompute ``sum a_S P_S`` and check it vanishes with ``s0`` in the support."""
    pm2, kind = _reduced(pm, w.table)
    total = pa.MultilinearPoly.const(kind.field, pm2.total_bits, 0)
    support = set()
    for T, a in w.certificate.get("coefficients", []):
        if len(T) != w.n:
            return False
        total = total + int(a) * pa.build_PS(pm2, kind, T)
        if int(a) % kind.field:
            support.add(tuple(sorted(T)))
    return bool(support) and total.is_zero() and tuple(sorted(w.s0)) in support
