"""Genus-2 square-tiled surfaces: census, invariants and the closed formulas they are checked against."""

__version__ = "0.1.0"
