"""Enumeration budgets.

``BITPROBE_BUDGET`` overrides the defaults. It accepts either a bare integer
(the subset budget) or comma-separated ``key=value`` pairs with keys
``bits`` and ``subsets``, e.g. ``BITPROBE_BUDGET=bits=20,subsets=100000``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_BITS = 24
DEFAULT_SUBSETS = 5_000_000


@dataclass(frozen=True)
class Budget:
    bits: int = DEFAULT_BITS        # max free memory bits for exhaustive scans
    subsets: int = DEFAULT_SUBSETS  # max subsets / candidates for enumerations


def parse_budget(text: str, base: Budget | None = None) -> Budget:
    base = base or Budget()
    text = text.strip()
    if not text:
        return base
    if text.isdigit():
        return replace(base, subsets=int(text))
    updates = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("bits", "subsets"):
            raise ValueError(f"bad budget entry {part!r}")
        updates[key] = int(value)
    return replace(base, **updates)


def default_budget() -> Budget:
    env = os.environ.get("BITPROBE_BUDGET")
    return parse_budget(env) if env else Budget()


def resolve(budget: Budget | None) -> Budget:
    return budget if budget is not None else default_budget()
