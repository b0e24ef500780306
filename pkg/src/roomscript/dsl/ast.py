"""AST node types for scene description programs.

Nodes compare structurally; source spans are excluded from equality so a
program and its canonical reprint compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Span",
    "Expr",
    "Num",
    "Str",
    "Name",
    "UnaryOp",
    "BinOp",
    "ListLit",
    "Index",
    "Call",
    "Comprehension",
    "Statement",
    "Assign",
    "ExprStmt",
    "ForStmt",
    "Program",
]


@dataclass(frozen=True)
class Span:
    """Inclusive 1-based line range of a syntax element."""

    start_line: int
    end_line: int


class Expr:
    pass


@dataclass(eq=True)
class Num(Expr):
    # int and float are distinct value types in the language (a bare int in
    # 0..3 is a direction, a float is a distance), so the literal kind matters.
    value: int | float

    def __post_init__(self) -> None:
        if isinstance(self.value, bool):
            raise TypeError("Num holds int or float, not bool")


@dataclass(eq=True)
class Str(Expr):
    value: str


@dataclass(eq=True)
class Name(Expr):
    ident: str


@dataclass(eq=True)
class UnaryOp(Expr):
    op: str  # "-"
    operand: Expr


@dataclass(eq=True)
class BinOp(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(eq=True)
class ListLit(Expr):
    items: list[Expr]


@dataclass(eq=True)
class Index(Expr):
    target: Expr
    index: Expr


@dataclass(eq=True)
class Call(Expr):
    func: str
    args: list[Expr]
    kwargs: list[tuple[str, Expr]]


@dataclass(eq=True)
class Comprehension(Expr):
    """List comprehension over a range: ``[expr for var in range(a, b)]``."""

    expr: Expr
    var: str
    range_args: list[Expr]


class Statement:
    pass


@dataclass(eq=True)
class Assign(Statement):
    target: str
    value: Expr
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(eq=True)
class ExprStmt(Statement):
    expr: Expr
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(eq=True)
class ForStmt(Statement):
    """``for var in range(a[, b]):`` with an indented statement block."""

    var: str
    range_args: list[Expr]
    body: list[Statement]
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(eq=True)
class Program:
    statements: list[Statement]

    def statement_count(self) -> int:
        """Total number of statements, counting loop bodies recursively."""

        def count(stmts: list[Statement]) -> int:
            total = 0
            for s in stmts:
                total += 1
                if isinstance(s, ForStmt):
                    total += count(s.body)
            return total

        return count(self.statements)
