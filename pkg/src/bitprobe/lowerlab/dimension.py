"""Linear-dependency witnesses for parity and "sum is not one".

Every element has a count vector over memory locations. Parity answers the
GF(2) dot product of that vector with the memory; "sum is not one" answers
1 unless the rational dot product equals 1. A vector that is a combination
of earlier vectors then pins down one element's answer from the others.
"""
from __future__ import annotations

from fractions import Fraction

from ..boolfunc import REPRESENTATIVES, Strategy, classify
from ..errors import WrongStrategy
from .probemap import ProbeMap, reduce_to
from .witness import Witness, WitnessKind

PARITY = REPRESENTATIVES["PARITY"][0]
SUM_NE_1 = REPRESENTATIVES["SUM_NE_1"][0]


def count_vectors(pm: ProbeMap) -> list[list[int]]:
    vecs = [[0] * pm.total_bits for _ in range(pm.m)]
    for u, row in enumerate(pm.locations().tolist()):
        for loc in row:
            vecs[u][loc] += 1
    return vecs


def gf2_dependency(vectors: list[list[int]]) -> tuple[int, list[int]] | None:
    """First ``u`` whose vector (mod 2) is a sum of earlier ones, and those."""
    basis: dict[int, tuple[int, int]] = {}  # pivot bit -> (row bits, combination bits)
    for u, vec in enumerate(vectors):
        row = sum(1 << i for i, v in enumerate(vec) if v % 2)
        combo = 0
        while row:
            piv = row.bit_length() - 1
            if piv not in basis:
                break
            brow, bcombo = basis[piv]
            row ^= brow
            combo ^= bcombo
        if row == 0:
            return u, [v for v in range(u) if combo >> v & 1]
        basis[row.bit_length() - 1] = (row, combo | (1 << u))
    return None


def rational_dependency(vectors: list[list[int]]) -> tuple[int, dict[int, Fraction]] | None:
    """First ``u`` whose vector is a rational combination of earlier ones."""
    basis: list[tuple[int, list[Fraction], dict[int, Fraction]]] = []
    for u, vec in enumerate(vectors):
        row = [Fraction(v) for v in vec]
        combo: dict[int, Fraction] = {}
        for piv, brow, bcombo in basis:
            f = row[piv]
            if f:
                row = [a - f * b for a, b in zip(row, brow)]
                for k, c in bcombo.items():
                    combo[k] = combo.get(k, Fraction(0)) + f * c
        piv = next((i for i, v in enumerate(row) if v), None)
        if piv is None:
            coeffs = {k: c for k, c in sorted(combo.items()) if c}
            return u, coeffs
        inv = 1 / row[piv]
        row = [v * inv for v in row]
        # row = (vec_u - sum combo_k vec_k) / pivot
        new_combo = {k: -c * inv for k, c in combo.items()}
        new_combo[u] = inv
        basis.append((piv, row, new_combo))
    return None


def dependency_witness(pm: ProbeMap, table: int) -> Witness | None:
    fc = classify(table)
    if fc.strategy is not Strategy.DIMENSION:
        raise WrongStrategy(f"{fc.name} is handled by {fc.strategy.value}")
    reduced = reduce_to(pm, table, [fc.representative])
    if reduced is None:
        raise ValueError("this class member needs separate arrays")
    pm2, rep = reduced
    vecs = count_vectors(pm2)
    n = 1
    if rep == PARITY:
        dep = gf2_dependency(vecs)
        if dep is None:
            return None
        u, others = dep
        cert = {"field": "GF2", "element": u, "coefficients": {v: "1" for v in others},
                "contradiction": "stored element's parity equals the sum of excluded parities"}
        return Witness(WitnessKind.DEPENDENCY, table, n, {u}, set(others), cert)
    dep = rational_dependency(vecs)
    if dep is None:
        return None
    u, coeffs = dep
    total = sum(coeffs.values(), Fraction(0))
    cert = {"field": "Q", "element": u,
            "coefficients": {v: str(c) for v, c in coeffs.items()}, "sum": str(total),
            "contradiction": ("empty set forces the coefficient sum to be 1; "
                              "then storing the element gives it dot product 1")}
    if total == 1:
        return Witness(WitnessKind.DEPENDENCY, table, n, {u}, set(coeffs), cert)
    return Witness(WitnessKind.DEPENDENCY, table, n, set(), {u} | set(coeffs), cert)
