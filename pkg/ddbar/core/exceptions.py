"""
Exception hierarchy shared by the library and the command line
"""

from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_INPUT_ERROR = 2


class DdbarError(Exception):
    """Base error; ``detail`` carries structured context for reports"""

    exit_code = EXIT_INPUT_ERROR

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": type(self).__name__, "message": self.message}
        if self.detail:
            payload["detail"] = self.detail
        return payload


class ParseError(DdbarError):
    """Located syntax error in an input document or expression"""

    def __init__(self, message: str, line: int = 1, column: int = 1, **detail: Any):
        super().__init__(
            f"{message} (line {line}, column {column})",
            {"line": line, "column": column, **detail},
        )
        self.line = line
        self.column = column


class ScalarSyntaxError(ParseError):
    pass


class ScalarDivisionError(DdbarError, ZeroDivisionError):
    exit_code = EXIT_INPUT_ERROR

    def __init__(self, message: str = "division by zero scalar"):
        super().__init__(message)


class FieldMismatchError(DdbarError):
    pass


class InvalidBicomplexError(DdbarError):
    pass


class AlgebraValidationError(DdbarError):
    """Raised with the first generator, relation or monomial that breaks an axiom"""

    def __init__(self, message: str, witness: Optional[str] = None, **detail: Any):
        if witness is not None:
            detail["witness"] = witness
        super().__init__(message, detail)
        self.witness = witness


class TruncationOverflowError(DdbarError):
    pass


class WindowError(DdbarError):
    pass


class PreconditionError(DdbarError):
    pass


class FanValidationError(DdbarError):
    pass


class ContractionError(AlgebraValidationError):
    pass


class VerificationError(DdbarError):
    """An internal verification step disagreed with the construction"""

    exit_code = EXIT_VERDICT_FAILED


class SchemaValidationError(DdbarError):
    """A document failed its schema; ``detail['path']`` points at the offending field"""
