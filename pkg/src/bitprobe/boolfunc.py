"""Three-variable query functions and their equivalence classes.

A function is an 8-bit truth table: bit ``4x + 2y + z`` holds ``f(x, y, z)``,
so majority is ``0xE8``. Two functions are equivalent when one is obtained
from the other by permuting and negating inputs (48 transforms). Output
negation is not part of the group, which leaves 22 classes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Callable

Transform = tuple[tuple[int, int, int], int]  # (permutation, negation mask)

PERMUTATIONS: tuple[tuple[int, int, int], ...] = tuple(permutations(range(3)))
TRANSFORMS: tuple[Transform, ...] = tuple((p, mask) for p in PERMUTATIONS for mask in range(8))


class Strategy(enum.Enum):
    HEIGHT2 = "HEIGHT2"
    MAJORITY_MODEL_GRAPH = "MAJORITY_MODEL_GRAPH"
    DENSITY = "DENSITY"
    DIMENSION = "DIMENSION"
    DEGREE = "DEGREE"


@dataclass(frozen=True)
class QueryFunction3:
    truth_table: int
    name: str | None = None

    def __post_init__(self):
        if not 0 <= self.truth_table <= 0xFF:
            raise ValueError(f"truth table out of range: {self.truth_table}")

    def __call__(self, x: int, y: int, z: int) -> int:
        return evaluate(self.truth_table, x, y, z)

    @property
    def hex(self) -> str:
        return to_hex(self.truth_table)

    @classmethod
    def from_hex(cls, text: str, name: str | None = None) -> QueryFunction3:
        return cls(parse_hex(text), name)


def to_hex(table: int) -> str:
    return f"{table:02X}"


def parse_hex(text: str) -> int:
    text = text.strip()
    if text.lower().startswith("0x"):
        text = text[2:]
    if not 1 <= len(text) <= 2:
        raise ValueError(f"expected two hex digits, got {text!r}")
    return int(text, 16)


def _table(f) -> int:
    return f.truth_table if isinstance(f, QueryFunction3) else int(f)


def evaluate(f, x: int, y: int, z: int) -> int:
    return (_table(f) >> (4 * x + 2 * y + z)) & 1


def from_callable(fn: Callable[[int, int, int], int]) -> int:
    """Truth table of a Python predicate on three bits."""
    table = 0
    for idx in range(8):
        if fn((idx >> 2) & 1, (idx >> 1) & 1, idx & 1):
            table |= 1 << idx
    return table


def apply_transform(f, perm, mask: int) -> int:
    """Table of ``g(v) = f(v[perm[0]] ^ m0, v[perm[1]] ^ m1, v[perm[2]] ^ m2)``.

    ``m0`` is the high bit of ``mask``.
    """
    table = _table(f)
    out = 0
    for idx in range(8):
        v = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
        a = [v[perm[i]] ^ ((mask >> (2 - i)) & 1) for i in range(3)]
        if (table >> (4 * a[0] + 2 * a[1] + a[2])) & 1:
            out |= 1 << idx
    return out


def orbit(f) -> frozenset[int]:
    table = _table(f)
    return frozenset(apply_transform(table, p, mask) for p, mask in TRANSFORMS)


def canonical(f) -> int:
    return min(orbit(f))


def find_transform(source, target) -> Transform | None:
    """Some ``(perm, mask)`` with ``apply_transform(source, perm, mask) == target``.

    The identity is preferred, then transforms without negations.
    """
    src, tgt = _table(source), _table(target)
    for p, mask in sorted(TRANSFORMS, key=lambda tr: (tr[1] != 0, tr[1], tr[0])):
        if apply_transform(src, p, mask) == tgt:
            return p, mask
    return None


# Named representatives. Each line builds the table from its formula so the
# hex constants in the tests are an independent check.
REPRESENTATIVES: dict[str, tuple[int, Strategy]] = {
    "ZERO": (from_callable(lambda x, y, z: 0), Strategy.HEIGHT2),
    "ONE": (from_callable(lambda x, y, z: 1), Strategy.HEIGHT2),
    "DICTATOR": (from_callable(lambda x, y, z: x), Strategy.HEIGHT2),
    "AND2": (from_callable(lambda x, y, z: x & y), Strategy.HEIGHT2),
    "NAND2": (from_callable(lambda x, y, z: 1 - (x & y)), Strategy.HEIGHT2),
    "MUX": (from_callable(lambda x, y, z: (x & y) | ((1 - x) & z)), Strategy.HEIGHT2),
    "XNOR2": (from_callable(lambda x, y, z: int(x == y)), Strategy.HEIGHT2),
    "MAJORITY": (from_callable(lambda x, y, z: int(x + y + z >= 2)), Strategy.MAJORITY_MODEL_GRAPH),
    "AND3": (from_callable(lambda x, y, z: x & y & z), Strategy.DENSITY),
    "NAND3": (from_callable(lambda x, y, z: 1 - (x & y & z)), Strategy.DENSITY),
    "XOR_AND": (from_callable(lambda x, y, z: (x ^ y) & z), Strategy.DENSITY),
    "NOT_XOR_AND": (from_callable(lambda x, y, z: 1 - ((x ^ y) & z)), Strategy.DENSITY),
    "OR_AND": (from_callable(lambda x, y, z: (x | y) & z), Strategy.DENSITY),
    "NOT_OR_AND": (from_callable(lambda x, y, z: 1 - ((x | y) & z)), Strategy.DENSITY),
    "ALL_EQUAL": (from_callable(lambda x, y, z: int(x == y == z)), Strategy.DENSITY),
    "NOT_ALL_EQUAL": (from_callable(lambda x, y, z: int(not x == y == z)), Strategy.DENSITY),
    "ALL_OR_YZ_ZERO": (from_callable(lambda x, y, z: (x & y & z) | ((1 - y) & (1 - z))), Strategy.DENSITY),
    "NOT_ALL_OR_YZ_ZERO": (from_callable(lambda x, y, z: 1 - ((x & y & z) | ((1 - y) & (1 - z)))), Strategy.DENSITY),
    "PARITY": (from_callable(lambda x, y, z: x ^ y ^ z), Strategy.DIMENSION),
    "SUM_NE_1": (from_callable(lambda x, y, z: int(x + y + z != 1)), Strategy.DIMENSION),
    "XY_XOR_Z": (from_callable(lambda x, y, z: (x & y) ^ z), Strategy.DEGREE),
    "SUM_EQ_1": (from_callable(lambda x, y, z: int(x + y + z == 1)), Strategy.DEGREE),
}

MAJ = REPRESENTATIVES["MAJORITY"][0]

# DENSITY functions come in complementary pairs; the prover for the second
# member swaps the roles of the stored and excluded sets.
COMPLEMENT_PAIRS = (
    ("AND3", "NAND3"),
    ("XOR_AND", "NOT_XOR_AND"),
    ("OR_AND", "NOT_OR_AND"),
    ("ALL_EQUAL", "NOT_ALL_EQUAL"),
    ("ALL_OR_YZ_ZERO", "NOT_ALL_OR_YZ_ZERO"),
)


@dataclass(frozen=True)
class FunctionClass:
    class_id: int
    canonical_table: int
    strategy: Strategy
    class_size: int
    name: str
    representative: int


@lru_cache(maxsize=None)
def all_classes() -> tuple[FunctionClass, ...]:
    by_canon = {}
    for name, (table, strategy) in REPRESENTATIVES.items():
        by_canon[canonical(table)] = (name, table, strategy)
    canons = sorted({canonical(t) for t in range(256)})
    if set(canons) != set(by_canon):
        raise AssertionError("representative list does not cover every class")
    out = []
    for cid, c in enumerate(canons):
        name, table, strategy = by_canon[c]
        out.append(FunctionClass(cid, c, strategy, len(orbit(c)), name, table))
    return tuple(out)


@lru_cache(maxsize=None)
def _class_index() -> dict[int, FunctionClass]:
    index = {}
    for fc in all_classes():
        for table in orbit(fc.canonical_table):
            index[table] = fc
    return index


def classify(f) -> FunctionClass:
    return _class_index()[_table(f)]


def height2_classes() -> list[FunctionClass]:
    return [fc for fc in all_classes() if fc.strategy is Strategy.HEIGHT2]


def restrict(f, var: int, value: int) -> int:
    """Table of ``f`` with input ``var`` (0 = x) fixed to ``value``."""
    table = _table(f)
    shift = 2 - var
    out = 0
    for idx in range(8):
        src = (idx & ~(1 << shift)) | (value << shift)
        if (table >> src) & 1:
            out |= 1 << idx
    return out


@lru_cache(maxsize=None)
def _height(table: int, free: int) -> int:
    if table in (0, 0xFF):
        return 0
    best = 3
    for var in range(3):
        if free >> var & 1:
            rest = free & ~(1 << var)
            h = 1 + max(_height(restrict(table, var, 0), rest),
                        _height(restrict(table, var, 1), rest))
            best = min(best, h)
    return best


def decision_tree_height(f) -> int:
    """Minimum worst-case number of adaptive probes needed to evaluate ``f``."""
    return _height(_table(f), 0b111)
