"""Combinatorial graph-complex calculus: orientations, boundary operators,
graph homology, signed permutation groups and boundary-stratum bookkeeping."""

__version__ = "0.1.0"
