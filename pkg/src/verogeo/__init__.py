"""Finite incidence geometry: Veronese spaces over partial linear spaces,
their hyperplanes and affine reducts, and desk-scale verification."""

__version__ = "0.1.0"
