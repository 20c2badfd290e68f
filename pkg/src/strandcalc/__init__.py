"""Exact stranded-graph calculus for rank-5 O(N) tensor models."""

__version__ = "0.1.0"
