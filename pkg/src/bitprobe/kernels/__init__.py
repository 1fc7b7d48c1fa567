"""Hot loops with two interchangeable backends.

The numba backend is used by default. Set ``BITPROBE_NO_NUMBA=1`` (or run
without numba installed) to use the vectorised numpy fallback instead.
``set_backend`` switches at runtime; the benchmark and the cross-check
tests use it to run both on identical inputs.

Conventions shared by every kernel:

* a memory word for ``scan_memories``/``valid_maps`` is an integer whose
  bit ``nbits - 1 - j`` holds location ``j``, so integer order is the
  lexicographic order of the bit vector;
* ``table_bits`` is a uint8 array of length ``2**t`` where the first probe
  is the most significant bit of the index.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _numpy

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

BACKENDS: dict[str, ModuleType] = {"numpy": _numpy}
if _numba is not None:
    BACKENDS["numba"] = _numba

_NAMES = ("scan_memories", "valid_maps", "expansion_violation",
          "query_nonadaptive", "query_adaptive")


def _initial() -> str:
    if os.environ.get("BITPROBE_NO_NUMBA", "").strip() not in ("", "0") or _numba is None:
        return "numpy"
    return "numba"


_active = _initial()


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}")
    _active = name


def _dispatch(name):
    def call(*args):
        return getattr(BACKENDS[_active], name)(*args)
    call.__name__ = name
    return call


scan_memories = _dispatch("scan_memories")
valid_maps = _dispatch("valid_maps")
expansion_violation = _dispatch("expansion_violation")
query_nonadaptive = _dispatch("query_nonadaptive")
query_adaptive = _dispatch("query_adaptive")


def as_locs(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def as_bits(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.uint8)
