"""Exact computations for H-twisted Lie algebras and their graded realizations."""

__version__ = "0.1.0"
