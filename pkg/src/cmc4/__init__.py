"""Exact sparse polynomial arithmetic, derivations and eliminations for
replaying a chain of curvature identities against transcribed fixtures."""

__version__ = "0.1.0"
