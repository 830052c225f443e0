"""Knot diagrams, Bar-Natan homology and the slice-torus invariants built from it."""

from __future__ import annotations

__version__ = "0.1.0"
