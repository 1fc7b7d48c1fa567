"""Bit-probe set-membership schemes: constructions, exhaustive verifiers and
small-instance lower-bound tools.

Submodules: ``boolfunc`` (three-variable query functions), ``probegraph``
(probe graphs, expansion, matchings, cycles), ``schemes`` (constructions and
verification), ``lowerlab`` (minimum-space search and impossibility
witnesses), ``polyalg`` (multilinear polynomials over F2/F3),
``fileformats`` and ``cli``.
"""
__version__ = "0.1.0"
