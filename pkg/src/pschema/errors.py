"""Error type shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class PSError(Exception):
    """An error carrying a stable machine-readable ``code``.

    Codes are strings such as ``E_ARITY_MISMATCH``; the CLI maps them to
    exit statuses.
    """

    def __init__(self, code: str, message: str, span: Optional[SourceSpan] = None):
        self.code = code
        self.message = message
        self.span = span
        where = f"{span}: " if span is not None else ""
        super().__init__(f"{where}{code}: {message}")


class ParseError(PSError):
    def __init__(self, message: str, span: SourceSpan, code: str = "E_PARSE"):
        super().__init__(code, message, span)


class Inconsistent(PSError):
    """Raised when simplification proves that no model exists."""

    def __init__(self, message: str = "ground theory has no models"):
        super().__init__("E_INCONSISTENT", message)
