"""Exception types shared across lexdialog modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Byte range into a source text, with the line/column of its start."""

    begin: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.begin < 0 or self.end < self.begin:
            raise ValueError(f"bad span ({self.begin}, {self.end})")


class LexdialogError(Exception):
    """Base class for every error raised by this package."""

    code = "error"


class SignatureError(LexdialogError):
    """Invalid signature declaration."""

    code = "signature_error"


class FormulaError(LexdialogError):
    """A formula violates well-formedness rules against its signature."""

    code = "formula_error"

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(message)
        self.message = message
        self.span = span


class ParseError(FormulaError):
    """Syntax or validation failure while reading concrete syntax."""

    code = "parse_error"

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span.line}:{self.span.column}: {self.message}"
        return self.message


class UnknownExclusion(FormulaError):
    """A same/except macro excludes a function the signature never declared."""

    code = "unknown_exclusion"


class DataError(LexdialogError):
    """A case or trace file violates its format or its signature."""

    code = "data_error"

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self) -> str:
        if self.path:
            return f"{self.path}: {self.message}"
        return self.message


class LayerMismatch(LexdialogError):
    """A relational value met a temporal formula, or the other way round."""

    code = "layer_mismatch"


class ResourceLimit(LexdialogError):
    """A decision procedure ran out of its configured budget.

    Always an explicit outcome, never silently reported as unsat/valid.
    """

    code = "resource_limit"

    def __init__(self, message: str, *, states: int | None = None,
                 candidates: int | None = None):
        super().__init__(message)
        self.message = message
        self.states = states
        self.candidates = candidates


class UnknownFunction(LexdialogError):
    """A bias audit referenced a function the signature does not declare."""

    code = "unknown_function"


class ProtectedEqualsScore(LexdialogError):
    """The protected function and the score function must be distinct."""

    code = "protected_equals_score"
