"""Exact combinatorics of modified Macdonald polynomials on filled diagrams,
Macdonald intersection polynomials, Butler permutations, LLT expansions, and
(q,t)-Kostka tables, with exhaustive small-size verification."""

__version__ = "0.1.0"
