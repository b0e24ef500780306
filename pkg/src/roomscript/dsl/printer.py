"""Canonical source printer. ``parse(print_program(p))`` equals ``p``."""

from __future__ import annotations

from .ast import (
    Assign,
    BinOp,
    Call,
    Comprehension,
    Expr,
    ExprStmt,
    ForStmt,
    Index,
    ListLit,
    Name,
    Num,
    Program,
    Statement,
    Str,
    UnaryOp,
)

__all__ = ["print_program"]

_INDENT = "    "

# Binding strength used to decide parenthesization on reprint.
_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _quote(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def _num(value: int | float) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(value)


def _expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, Num):
        return _num(e.value)
    if isinstance(e, Str):
        return _quote(e.value)
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, UnaryOp):
        inner = _expr(e.operand, 3)
        text = f"-{inner}"
        return f"({text})" if parent_prec > 2 else text
    if isinstance(e, BinOp):
        prec = _PRECEDENCE[e.op]
        left = _expr(e.left, prec)
        # right operand of - and / needs parens at equal precedence
        right = _expr(e.right, prec + 1)
        text = f"{left} {e.op} {right}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(e, ListLit):
        return "[" + ", ".join(_expr(x) for x in e.items) + "]"
    if isinstance(e, Index):
        return f"{_expr(e.target, 3)}[{_expr(e.index)}]"
    if isinstance(e, Call):
        parts = [_expr(a) for a in e.args]
        parts += [f"{k}={_expr(v)}" for k, v in e.kwargs]
        return f"{e.func}({', '.join(parts)})"
    if isinstance(e, Comprehension):
        rng = ", ".join(_expr(a) for a in e.range_args)
        return f"[{_expr(e.expr)} for {e.var} in range({rng})]"
    raise TypeError(f"unknown expression node {e!r}")


def _stmt(s: Statement, depth: int, out: list[str]) -> None:
    pad = _INDENT * depth
    if isinstance(s, Assign):
        out.append(f"{pad}{s.target} = {_expr(s.value)}")
    elif isinstance(s, ExprStmt):
        out.append(f"{pad}{_expr(s.expr)}")
    elif isinstance(s, ForStmt):
        rng = ", ".join(_expr(a) for a in s.range_args)
        out.append(f"{pad}for {s.var} in range({rng}):")
        for child in s.body:
            _stmt(child, depth + 1, out)
    else:
        raise TypeError(f"unknown statement node {s!r}")


def print_program(program: Program) -> str:
    """Render a program as canonical text (4-space indents, spaced operators)."""
    out: list[str] = []
    for s in program.statements:
        _stmt(s, 0, out)
    if not out:
        return ""
    return "\n".join(out) + "\n"
