"""Exact relativistic Kepler levels for a position-dependent mass m*(r) = m(1 + a/r)."""
from pdmkepler.config import VERSION as __version__
from pdmkepler.errors import NumericalError, PdmKeplerError, PhysicsDomainError
from pdmkepler.model import LevelResult, ModelParams, QuantumNumbers
from pdmkepler.spectrum import energy_exact

__all__ = [
    "LevelResult",
    "ModelParams",
    "NumericalError",
    "PdmKeplerError",
    "PhysicsDomainError",
    "QuantumNumbers",
    "energy_exact",
    "__version__",
]
