"""Error types for parsing and execution of scene programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

__all__ = ["DslError", "ParseError", "ErrorClass", "ExecError", "classify_message"]


class DslError(Exception):
    """Base class for all scene-language errors."""


class ParseError(DslError):
    """Syntax error with source position. Malformed input never crashes the parser."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class ErrorClass(Enum):
    HALLUCINATION = "hallucination"
    MISUSE = "misuse"


def classify_message(message: str) -> ErrorClass:
    """Classify a runtime failure message.

    Undefined names produce messages containing "is not defined" and are
    hallucinations (invented functions or object references); everything else
    (wrong arity, wrong argument type, bad index, division by zero) is misuse.
    """
    if "is not defined" in message:
        return ErrorClass.HALLUCINATION
    return ErrorClass.MISUSE


@dataclass
class ExecError(DslError):
    """Execution failure pinned to the statement that raised it.

    ``statement_index`` is the position of the offending top-level statement;
    ``path`` drills into loop bodies (path[0] is the top-level index, each
    further element indexes into the enclosing loop body).
    """

    message: str
    statement_index: int
    path: tuple[int, ...]
    line: int
    error_class: ErrorClass = field(init=False)

    def __post_init__(self) -> None:
        self.error_class = classify_message(self.message)
        super().__init__(self.message)
