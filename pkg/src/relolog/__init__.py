"""Relational ologs: syntax, semantics in three backends, logic and search."""

__version__ = "0.1.0"
