"""Numerical construction of a C^1 symplectic twist map whose essential
invariant curve carries Denjoy dynamics and has a corner along one orbit."""

from .errors import (
    ConstructionError,
    DomainError,
    OrbitBeyondTable,
    SeedInfeasible,
    SurgeryInfeasible,
)

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "DomainError",
    "OrbitBeyondTable",
    "SeedInfeasible",
    "SurgeryInfeasible",
    "__version__",
]
