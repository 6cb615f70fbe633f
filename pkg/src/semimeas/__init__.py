"""Exact set-function extension, order correspondences and semilattice-indexed processes."""
__version__ = "0.1.0"

from .estimators import DoobMeyer, QuasiMartingaleNorm, Riesz, SemimodularExtender
from .semimodular import (NotSemimodularError, SetFunction, extend_to_algebra, extend_to_lattice,
                          extend_to_ring, is_semimodular_enum, is_semimodular_solver)
from .setcore import GroundSet, SetFamily, classify_family, generate_ring

__all__ = [
    "DoobMeyer", "GroundSet", "NotSemimodularError", "QuasiMartingaleNorm", "Riesz",
    "SemimodularExtender", "SetFamily", "SetFunction", "classify_family", "extend_to_algebra",
    "extend_to_lattice", "extend_to_ring", "generate_ring", "is_semimodular_enum",
    "is_semimodular_solver",
]
