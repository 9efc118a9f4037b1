"""Constructive redrawing of plane graphs with a prescribed collinear vertex set."""

__version__ = "0.1.0"
