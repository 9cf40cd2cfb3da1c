"""Exact computations with Grothendieck rings of symmetric fusion categories."""

__version__ = "0.1.0"
