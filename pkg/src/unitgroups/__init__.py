"""Unit groups of commutative rings: realizability decisions, witness rings, oracles."""

__version__ = "0.1.0"
