"""Weak and strong K_s^r-saturation in random r-uniform hypergraphs."""

from .errors import (
    ConstructionFailure,
    FormatError,
    Infeasible,
    IntegrityViolation,
    NoCoreFound,
    NotFound,
    ParameterError,
    TooLarge,
    TraceFailed,
)
from .hypercore import Hypergraph, wsat_complete_formula

__version__ = "0.1.0"

__all__ = [
    "ConstructionFailure",
    "FormatError",
    "Hypergraph",
    "Infeasible",
    "IntegrityViolation",
    "NoCoreFound",
    "NotFound",
    "ParameterError",
    "TooLarge",
    "TraceFailed",
    "wsat_complete_formula",
]
