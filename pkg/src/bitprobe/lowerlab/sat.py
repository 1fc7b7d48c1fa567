"""Does some memory give prescribed answers on a probe map?

Exhaustive scans cover every memory bit touched by the constrained
elements when there are at most ``budget.bits`` of them. Beyond that a
propagation engine (unit propagation plus failed-literal probing) can
still prove unsatisfiability; when it cannot, ``Inconclusive`` is raised
rather than guessing.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable

import numpy as np

from .. import kernels
from ..config import Budget, resolve
from ..errors import Inconclusive
from ..schemes import table_bits
from .probemap import ProbeMap


def answers(pm: ProbeMap, table: int, memory) -> np.ndarray:
    """Every element's answer under ``memory`` (a 0/1 vector of total_bits)."""
    bits = np.asarray(memory, dtype=np.uint8)
    return kernels.query_nonadaptive(kernels.as_bits(bits), kernels.as_locs(pm.locations()),
                                     table_bits(table, pm.t))


def _constraints(pm: ProbeMap, yes, no):
    elems = sorted(yes | no)
    locs = pm.locations()[elems] if elems else np.zeros((0, pm.t), dtype=np.int64)
    want = np.array([1 if u in yes else 0 for u in elems], dtype=np.uint8)
    return elems, locs, want


def find_memory(pm: ProbeMap, table: int, yes: Iterable[int], no: Iterable[int] = (),
                budget: Budget | None = None) -> np.ndarray | None:
    """Lexicographically first memory answering 1 on ``yes`` and 0 on ``no``.

    Untouched bits are 0. Returns None when no memory exists.
    """
    budget = resolve(budget)
    yes, no = set(yes), set(no)
    if yes & no:
        return None
    elems, locs, want = _constraints(pm, yes, no)
    touched = np.unique(locs)
    full = np.zeros(pm.total_bits, dtype=np.uint8)
    if len(touched) > budget.bits:
        if refute(pm, table, yes, no):
            return None
        raise Inconclusive(f"{len(touched)} free bits exceed the exhaustive limit "
                           f"{budget.bits} and propagation found no contradiction")
    if not elems:
        return full
    compact = np.searchsorted(touched, locs)
    nb = len(touched)
    mem = kernels.scan_memories(kernels.as_locs(compact), table_bits(table, pm.t),
                                kernels.as_bits(want), nb)
    if mem < 0:
        return None
    for i, loc in enumerate(touched):
        full[loc] = (mem >> (nb - 1 - i)) & 1
    return full


def satisfiable_for_set(pm: ProbeMap, table: int, S: Iterable[int],
                        budget: Budget | None = None) -> np.ndarray | None:
    """A memory representing exactly ``S`` (every element constrained)."""
    S = set(S)
    return find_memory(pm, table, S, set(range(pm.m)) - S, budget)


# ----------------------------------------------------------- propagation

def _local_options(vars_, table, want, assign):
    """Consistent assignments of one constraint's variables."""
    uniq = sorted(set(vars_))
    opts = []
    for vals in product((0, 1), repeat=len(uniq)):
        env = dict(zip(uniq, vals))
        if any(assign.get(v, env[v]) != env[v] for v in uniq):
            continue
        idx = 0
        for v in vars_:
            idx = (idx << 1) | env[v]
        if (table >> idx) & 1 == want:
            opts.append(env)
    return uniq, opts


def propagate(constraints, assign: dict[int, int]) -> dict[int, int] | None:
    """Fix every variable forced by a single constraint; None on conflict."""
    assign = dict(assign)
    changed = True
    while changed:
        changed = False
        for vars_, table, want in constraints:
            uniq, opts = _local_options(vars_, table, want, assign)
            if not opts:
                return None
            for v in uniq:
                if v in assign:
                    continue
                vals = {o[v] for o in opts}
                if len(vals) == 1:
                    assign[v] = vals.pop()
                    changed = True
    return assign


def refute(pm: ProbeMap, table: int, yes: Iterable[int], no: Iterable[int]) -> bool:
    """True if propagation with failed-literal probing proves no memory exists."""
    yes, no = set(yes), set(no)
    if yes & no:
        return True
    locs = pm.locations()
    constraints = [(tuple(int(v) for v in locs[u]), table, 1 if u in yes else 0)
                   for u in sorted(yes | no)]
    variables = sorted({v for c in constraints for v in c[0]})
    assign = propagate(constraints, {})
    if assign is None:
        return True
    progress = True
    while progress:
        progress = False
        for v in variables:
            if v in assign:
                continue
            zero = propagate(constraints, {**assign, v: 0})
            one = propagate(constraints, {**assign, v: 1})
            if zero is None and one is None:
                return True
            if zero is None or one is None:
                assign = one if zero is None else zero
                progress = True
    return False
