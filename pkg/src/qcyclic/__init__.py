"""Exact rational computation of Hochschild, cyclic, negative cyclic and periodic cyclic homology."""

from .exactla import ComplexError, LinAlgError, SparseMatrix, Subspace
from .algcore import Algebra, AlgebraError, validate_algebra
from .cyccat import CyclicModule, StructureError, validate_cyclic, validate_simplicial
from .hhdecomp import hh, hh_map
from .cychom import CyclicHomology, DepthError, hc, hc_minus, hp, sbi

__all__ = [
    "Algebra",
    "AlgebraError",
    "ComplexError",
    "CyclicHomology",
    "CyclicModule",
    "DepthError",
    "LinAlgError",
    "SparseMatrix",
    "StructureError",
    "Subspace",
    "hc",
    "hc_minus",
    "hh",
    "hh_map",
    "hp",
    "sbi",
    "validate_algebra",
    "validate_cyclic",
    "validate_simplicial",
]
