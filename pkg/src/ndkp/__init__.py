"""Exact solutions and residual checks for non-autonomous lattice KP-type equations."""

__version__ = "0.1.0"

from .errors import NdkpError
from .fields import DeformConstants, FieldId, Fields
from .lattice import LatticeParams, LatticePoint, Selector
from .solution import BlockSpec, SpectralConfig
from .verify import Verifier, invariance_check, oracle_deviation

__all__ = [
    "BlockSpec",
    "DeformConstants",
    "FieldId",
    "Fields",
    "LatticeParams",
    "LatticePoint",
    "NdkpError",
    "Selector",
    "SpectralConfig",
    "Verifier",
    "invariance_check",
    "oracle_deviation",
]
