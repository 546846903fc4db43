"""Crystallizations and triangulations of tori and projective spaces, cup
products on simplicial cell complexes, and determinant-tensor decompositions
read off periodic triangulations.  All arithmetic is exact."""

from .cellcomplex import Chain, Cochain, SimplicialCellComplex, validate
from .lattice import Lattice, matrix_A, matrix_B
from .periodic import (
    PeriodicTriangulation,
    QuotientComplex,
    cross_polytope_rp,
    crystal_torus,
    quotient,
    staircase,
    tri_torus,
)

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "Cochain",
    "Lattice",
    "PeriodicTriangulation",
    "QuotientComplex",
    "SimplicialCellComplex",
    "cross_polytope_rp",
    "crystal_torus",
    "matrix_A",
    "matrix_B",
    "quotient",
    "staircase",
    "tri_torus",
    "validate",
]
