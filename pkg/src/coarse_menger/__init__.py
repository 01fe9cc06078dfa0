"""Coarse Menger duality toolkit: scattered path packings, distance-d covers and their certificates."""

__version__ = "0.1.0"
