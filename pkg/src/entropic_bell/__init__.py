"""Entropic Bell inequalities, von Neumann entropy and mixing order."""

__version__ = "0.1.0"
