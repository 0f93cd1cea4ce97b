"""Exact enumeration and classification of lattice polytopes by normalized volume."""

from .exact import LatticePolytope, NotFullDimensional, SingularMatrix, convex_hull, det, hnf

__all__ = ["LatticePolytope", "NotFullDimensional", "SingularMatrix", "convex_hull", "det", "hnf"]
__version__ = "0.1.0"
