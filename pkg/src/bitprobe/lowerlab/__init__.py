"""Small-instance lower-bound laboratory: exhaustive search, satisfiability,
and impossibility witnesses for three-probe schemes."""
from __future__ import annotations

from ..boolfunc import Strategy, classify
from ..config import Budget
from ..errors import WrongStrategy
from .probemap import Layout, ProbeMap, random_probe_map, reduce_to, transform_map
from .sat import answers, find_memory, refute, satisfiable_for_set
from .search import SearchResult, canonical_maps, min_space_search
from .witness import Verdict, Witness, WitnessKind, check_witness, structurally_valid
from .forcing import ModelGraph, build_model_graph, detect_forced
from .density import density_witness
from .dimension import dependency_witness
from .degree import degree_witness


def find_witness(pm: ProbeMap, table: int, n: int, budget: Budget | None = None) -> Witness | None:
    """Run the prover matching the class of ``table``."""
    fc = classify(table)
    if fc.strategy is Strategy.MAJORITY_MODEL_GRAPH:
        reduced = reduce_to(pm, table, [fc.representative])
        if reduced is None or reduced[0].layout is not Layout.SINGLE_ARRAY:
            raise ValueError("majority forcing needs a single array")
        w = detect_forced(build_model_graph(reduced[0]), n)
        if w is None:
            return None
        return Witness(w.kind, table, n, w.s0, w.s1, w.certificate)
    if fc.strategy is Strategy.DENSITY:
        return density_witness(pm, table, n)
    if fc.strategy is Strategy.DIMENSION:
        return dependency_witness(pm, table)
    if fc.strategy is Strategy.DEGREE:
        return degree_witness(pm, table, n, budget)
    raise WrongStrategy(f"{fc.name} has decision-tree height at most 2; no prover applies")


__all__ = [
    "Layout", "ProbeMap", "random_probe_map", "reduce_to", "transform_map",
    "answers", "find_memory", "refute", "satisfiable_for_set",
    "SearchResult", "canonical_maps", "min_space_search",
    "Verdict", "Witness", "WitnessKind", "check_witness", "structurally_valid",
    "ModelGraph", "build_model_graph", "detect_forced",
    "density_witness", "dependency_witness", "degree_witness", "find_witness",
]
