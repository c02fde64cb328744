"""Zeros of recurrence-generated polynomials and ratios of zeros of the induced trinomials."""

__version__ = "0.1.0"

from .polyalg import ComplexPoly, RecurrenceSpec, generate_sequence
from .rootfind import RootSet, SolverOptions, find_roots
from .trinomial import TrinomialSpec, specialize

__all__ = [
    "ComplexPoly",
    "RecurrenceSpec",
    "RootSet",
    "SolverOptions",
    "TrinomialSpec",
    "find_roots",
    "generate_sequence",
    "specialize",
    "__version__",
]
