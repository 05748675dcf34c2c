"""Finite-difference operators on complex polynomials and the geometry of their roots."""
from .poly import Polynomial, from_coefficients, from_roots, evaluate, derivative, shift, affine_substitute
from .roots import RootSet, Root, SolverConfig, find_roots, cluster_multiplicities

__version__ = "0.1.0"
