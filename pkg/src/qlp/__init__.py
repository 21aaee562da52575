"""Isotropy invariants of quasilinear p-forms over rational function fields."""

__version__ = "0.1.0"
