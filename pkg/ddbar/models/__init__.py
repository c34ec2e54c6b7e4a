"""
Exact data model: scalars, bicomplexes, algebras, fans and torus contractions
"""

from .algebra import AlgebraMorphism, Element, Generator, GradedAlgebra, free_algebra
from .bicomplex import Bicomplex, BicomplexMap, CohomologySpace, Flavor
from .cartan import CartanModel, TCbba
from .fan import Fan, StanleyReisnerData
from .linalg import QuotientSpace, SparseMatrix
from .scalars import FieldTag, Scalar, parse_scalar

__all__ = [
    # Scalars
    "FieldTag",
    "Scalar",
    "parse_scalar",
    # Linear algebra
    "SparseMatrix",
    "QuotientSpace",
    # Bicomplexes
    "Bicomplex",
    "BicomplexMap",
    "CohomologySpace",
    "Flavor",
    # Algebras
    "Generator",
    "Element",
    "GradedAlgebra",
    "AlgebraMorphism",
    "free_algebra",
    # Toric and equivariant data
    "Fan",
    "StanleyReisnerData",
    "TCbba",
    "CartanModel",
]
