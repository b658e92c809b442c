"""Exact computations with restricted Zassenhaus algebras in characteristic 2."""

__version__ = "0.1.0"
