"""
Core configuration, logging and errors
"""

from .config import settings
from .exceptions import (
    AlgebraValidationError,
    ContractionError,
    DdbarError,
    FanValidationError,
    FieldMismatchError,
    InvalidBicomplexError,
    ParseError,
    PreconditionError,
    ScalarDivisionError,
    ScalarSyntaxError,
    SchemaValidationError,
    TruncationOverflowError,
    VerificationError,
    WindowError,
)
from .logging_config import LoggerMixin, setup_logging

__all__ = [
    "settings",
    "setup_logging",
    "LoggerMixin",
    "DdbarError",
    "ParseError",
    "ScalarSyntaxError",
    "ScalarDivisionError",
    "SchemaValidationError",
    "FieldMismatchError",
    "InvalidBicomplexError",
    "AlgebraValidationError",
    "ContractionError",
    "TruncationOverflowError",
    "WindowError",
    "PreconditionError",
    "FanValidationError",
    "VerificationError",
]
