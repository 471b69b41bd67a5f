"""Exact computations with finite modules, etale spaces over profinite
spaces, mod-p group cohomology and the Lannes-Quillen centralizer
decomposition, at finite (desk) scale."""

__version__ = "0.1.0"
