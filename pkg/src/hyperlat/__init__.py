"""Reflectivity of rank-3 hyperbolic lattices."""
