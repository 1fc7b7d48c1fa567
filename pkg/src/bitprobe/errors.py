"""Exception types shared across the package.

Each maps to a CLI exit code (see ``cli.EXIT_CODES``).
"""
from __future__ import annotations


class BitprobeError(Exception):
    """Base class for package errors."""


class FormatError(BitprobeError, ValueError):
    """A scheme, memory, or witness file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class BudgetExceeded(BitprobeError):
    """An exhaustive enumeration would exceed its configured budget."""


class RetriesExhausted(BitprobeError):
    """Generate-and-verify found no admissible graph within the retry limit."""


class MatchingInfeasible(BitprobeError):
    """No system of disjoint representatives exists.

    ``certificate`` is a set of elements whose combined demand exceeds the
    size of their joint neighbourhood.
    """

    def __init__(self, certificate, demand: int, supply: int):
        self.certificate = frozenset(certificate)
        self.demand = demand
        self.supply = supply
        super().__init__(
            f"Hall violation: {len(self.certificate)} elements need {demand} "
            f"slots but see only {supply}"
        )


class SetTooLarge(BitprobeError, ValueError):
    """The requested set exceeds the scheme's capacity n."""


class AdmissibilityViolated(BitprobeError):
    """An encoder hit a configuration outside its verified range."""


class Inconclusive(BitprobeError):
    """Propagation neither found a contradiction nor a satisfying memory."""


class WrongStrategy(BitprobeError):
    """The query function's class is not handled by the requested prover."""


class NoGainAvailable(BitprobeError):
    """The edge set admits neither an intersecting pair nor a trapped edge."""
