"""Desk-scale simulation of public-key encryption, authentication and signatures for quantum messages."""
from . import ecurve, gf2, numtheory, qauth, qpke, qsign, qsim
from .errors import (
    DecodingError,
    DimensionError,
    ParameterError,
    ProtocolError,
    RankError,
    RedundancyError,
    SchemeMismatchError,
    SeparabilityError,
)

__version__ = "0.1.0"

__all__ = [
    "ecurve",
    "gf2",
    "numtheory",
    "qauth",
    "qpke",
    "qsign",
    "qsim",
    "DecodingError",
    "DimensionError",
    "ParameterError",
    "ProtocolError",
    "RankError",
    "RedundancyError",
    "SchemeMismatchError",
    "SeparabilityError",
]
