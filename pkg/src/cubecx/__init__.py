"""Combinatorial cube complexes, special colourings and dividing patterns."""

from .complex import Cube, CubeComplex, Hyperplane, is_median_graph
from .errors import (AmbiguousFill, CapExceeded, ConstructionFault, CubeComplexError,
                     InvalidComplex, NotCarrierRetract, SchemaError)
from .graph import SimplicialGraph

__all__ = [
    "AmbiguousFill", "CapExceeded", "ConstructionFault", "Cube", "CubeComplex",
    "CubeComplexError", "Hyperplane", "InvalidComplex", "NotCarrierRetract", "SchemaError",
    "SimplicialGraph", "is_median_graph",
]
