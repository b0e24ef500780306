"""Recursive-descent parser for scene programs."""

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
    Span,
    Statement,
    Str,
    UnaryOp,
)
from .errors import ParseError
from .lexer import Token, tokenize

__all__ = ["parse"]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers --------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.cur
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            got = tok.value if tok.value else tok.kind
            raise ParseError(f"expected {want!r}, found {got!r}", tok.line, tok.column)
        return self.advance()

    def at(self, kind: str, value: str | None = None) -> bool:
        return self.cur.kind == kind and (value is None or self.cur.value == value)

    # -- grammar ---------------------------------------------------------

    def program(self) -> Program:
        stmts: list[Statement] = []
        while not self.at("EOF"):
            stmts.append(self.statement())
        return Program(stmts)

    def statement(self) -> Statement:
        if self.at("NAME", "for"):
            return self.for_stmt()
        start = self.cur.line
        if self.at("NAME") and self.peek().kind == "OP" and self.peek().value == "=":
            target = self.advance().value
            self.advance()  # '='
            value = self.expression()
            end = self.tokens[self.pos - 1].line
            self.expect("NEWLINE")
            return Assign(target, value, Span(start, end))
        expr = self.expression()
        end = self.tokens[self.pos - 1].line
        self.expect("NEWLINE")
        return ExprStmt(expr, Span(start, end))

    def for_stmt(self) -> ForStmt:
        start = self.cur.line
        self.expect("NAME", "for")
        var = self.expect("NAME").value
        self.expect("NAME", "in")
        self.expect("NAME", "range")
        self.expect("OP", "(")
        range_args = [self.expression()]
        if self.at("OP", ","):
            self.advance()
            range_args.append(self.expression())
        self.expect("OP", ")")
        self.expect("OP", ":")
        self.expect("NEWLINE")
        self.expect("INDENT")
        body: list[Statement] = []
        while not self.at("DEDENT"):
            if self.at("EOF"):
                raise ParseError("unexpected end of input in loop body",
                                 self.cur.line, self.cur.column)
            body.append(self.statement())
        self.expect("DEDENT")
        end = self.tokens[self.pos - 2].line if self.pos >= 2 else start
        return ForStmt(var, range_args, body, Span(start, end))

    def expression(self) -> Expr:
        return self.additive()

    def additive(self) -> Expr:
        left = self.multiplicative()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance().value
            left = BinOp(op, left, self.multiplicative())
        return left

    def multiplicative(self) -> Expr:
        left = self.unary()
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.advance().value
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.at("OP", "-"):
            self.advance()
            return UnaryOp("-", self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        node = self.primary()
        while self.at("OP", "["):
            self.advance()
            index = self.expression()
            self.expect("OP", "]")
            node = Index(node, index)
        return node

    def primary(self) -> Expr:
        tok = self.cur
        if tok.kind == "INT":
            self.advance()
            return Num(int(tok.value))
        if tok.kind == "FLOAT":
            self.advance()
            return Num(float(tok.value))
        if tok.kind == "STRING":
            self.advance()
            return Str(tok.value)
        if tok.kind == "NAME":
            if self.peek().kind == "OP" and self.peek().value == "(":
                return self.call()
            self.advance()
            return Name(tok.value)
        if tok.kind == "OP" and tok.value == "(":
            self.advance()
            inner = self.expression()
            self.expect("OP", ")")
            return inner
        if tok.kind == "OP" and tok.value == "[":
            return self.list_or_comprehension()
        got = tok.value if tok.value else tok.kind
        raise ParseError(f"unexpected {got!r}", tok.line, tok.column)

    def call(self) -> Call:
        func = self.expect("NAME").value
        self.expect("OP", "(")
        args: list[Expr] = []
        kwargs: list[tuple[str, Expr]] = []
        while not self.at("OP", ")"):
            if args or kwargs:
                self.expect("OP", ",")
                if self.at("OP", ")"):  # trailing comma
                    break
            if (self.at("NAME") and self.peek().kind == "OP"
                    and self.peek().value == "="):
                kw = self.advance().value
                self.advance()  # '='
                kwargs.append((kw, self.expression()))
            else:
                if kwargs:
                    raise ParseError("positional argument after keyword argument",
                                     self.cur.line, self.cur.column)
                args.append(self.expression())
        self.expect("OP", ")")
        return Call(func, args, kwargs)

    def list_or_comprehension(self) -> Expr:
        self.expect("OP", "[")
        if self.at("OP", "]"):
            self.advance()
            return ListLit([])
        first = self.expression()
        if self.at("NAME", "for"):
            self.advance()
            var = self.expect("NAME").value
            self.expect("NAME", "in")
            self.expect("NAME", "range")
            self.expect("OP", "(")
            range_args = [self.expression()]
            if self.at("OP", ","):
                self.advance()
                range_args.append(self.expression())
            self.expect("OP", ")")
            self.expect("OP", "]")
            return Comprehension(first, var, range_args)
        items = [first]
        while self.at("OP", ","):
            self.advance()
            if self.at("OP", "]"):
                break
            items.append(self.expression())
        self.expect("OP", "]")
        return ListLit(items)


def parse(source: str) -> Program:
    """Parse program text into an AST.

    Raises ParseError (with line/column) on any malformed input; never
    raises anything else.
    """
    return _Parser(tokenize(source)).program()
