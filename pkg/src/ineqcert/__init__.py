"""Certified checking of the generalized Hölder, Minkowski, Chebyshev and
Menelaus statements on exact rational instances."""

__version__ = "0.1.0"
