"""Bi-objective observation scheduling for agile satellites with variable image duration."""

__version__ = "0.1.0"
