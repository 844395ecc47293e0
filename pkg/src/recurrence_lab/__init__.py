"""Computational exploration of topological recurrence on tori and integer sets."""

__version__ = "0.1.0"
