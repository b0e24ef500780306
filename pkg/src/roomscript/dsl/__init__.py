"""The scene description language: parser, printer, and interpreter."""

from .ast import (
    Assign,
    BinOp,
    Call,
    Comprehension,
    ExprStmt,
    ForStmt,
    Index,
    ListLit,
    Name,
    Num,
    Program,
    Span,
    Statement,
    Str,
    UnaryOp,
)
from .errors import DslError, ErrorClass, ExecError, ParseError, classify_message
from .interpreter import execute
from .parser import parse
from .printer import print_program
from .scene import ObjectDecl, ObjectKind, RelationKind, RelationStmt, SceneSpec

__all__ = [
    "Assign",
    "BinOp",
    "Call",
    "Comprehension",
    "DslError",
    "ErrorClass",
    "ExecError",
    "ExprStmt",
    "ForStmt",
    "Index",
    "ListLit",
    "Name",
    "Num",
    "ObjectDecl",
    "ObjectKind",
    "ParseError",
    "Program",
    "RelationKind",
    "RelationStmt",
    "SceneSpec",
    "Span",
    "Statement",
    "Str",
    "UnaryOp",
    "classify_message",
    "execute",
    "parse",
    "print_program",
]
