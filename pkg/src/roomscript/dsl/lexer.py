"""Tokenizer for scene programs.

Line oriented, Python-style: statements end at newlines, loop bodies are
indented blocks (spaces only), ``#`` starts a comment.  Emits synthetic
INDENT/DEDENT/NEWLINE tokens so the parser can treat blocks uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

__all__ = ["Token", "tokenize"]

_PUNCT = "+-*/=()[],:"


@dataclass(frozen=True)
class Token:
    kind: str  # NAME INT FLOAT STRING OP NEWLINE INDENT DEDENT EOF
    value: str
    line: int
    column: int


def _lex_line(text: str, line_no: int, start_col: int) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        col = start_col + i
        if c in " \t":
            i += 1
            continue
        if c == "#":
            break
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            # exponent part: 1e-3, 2.5E+4
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    seen_dot = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            word = text[i:j]
            tokens.append(Token("FLOAT" if seen_dot else "INT", word, line_no, col))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], line_no, col))
            i = j
            continue
        if c in "\"'":
            quote = c
            j = i + 1
            chars: list[str] = []
            while j < n:
                if text[j] == "\\":
                    if j + 1 >= n:
                        raise ParseError("unterminated escape in string", line_no, start_col + j)
                    esc = text[j + 1]
                    mapping = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"'}
                    if esc not in mapping:
                        raise ParseError(f"unknown escape '\\{esc}'", line_no, start_col + j)
                    chars.append(mapping[esc])
                    j += 2
                    continue
                if text[j] == quote:
                    break
                chars.append(text[j])
                j += 1
            if j >= n:
                raise ParseError("unterminated string literal", line_no, col)
            tokens.append(Token("STRING", "".join(chars), line_no, col))
            i = j + 1
            continue
        if c in _PUNCT:
            tokens.append(Token("OP", c, line_no, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line_no, col)
    return tokens


def tokenize(source: str) -> list[Token]:
    """Tokenize a whole program, inserting INDENT/DEDENT/NEWLINE tokens."""
    tokens: list[Token] = []
    indent_stack = [0]
    lines = source.split("\n")
    paren_depth_carry = 0  # continuation inside brackets spans lines
    pending: list[Token] = []

    for idx, raw in enumerate(lines):
        line_no = idx + 1
        stripped = raw.strip()
        if paren_depth_carry == 0:
            if not stripped or stripped.startswith("#"):
                continue
            indent = 0
            for ch in raw:
                if ch == " ":
                    indent += 1
                elif ch == "\t":
                    raise ParseError("tabs are not allowed in indentation", line_no, indent + 1)
                else:
                    break
            if indent > indent_stack[-1]:
                indent_stack.append(indent)
                tokens.append(Token("INDENT", "", line_no, 1))
            else:
                while indent < indent_stack[-1]:
                    indent_stack.pop()
                    tokens.append(Token("DEDENT", "", line_no, 1))
                if indent != indent_stack[-1]:
                    raise ParseError("unindent does not match any outer block", line_no, 1)
            pending = []

        line_tokens = _lex_line(raw, line_no, 1)
        for tok in line_tokens:
            if tok.kind == "OP" and tok.value in "([":
                paren_depth_carry += 1
            elif tok.kind == "OP" and tok.value in ")]":
                paren_depth_carry = max(0, paren_depth_carry - 1)
        pending.extend(line_tokens)

        if paren_depth_carry == 0 and pending:
            tokens.extend(pending)
            last = pending[-1]
            tokens.append(Token("NEWLINE", "", last.line, last.column + len(last.value)))
            pending = []

    if paren_depth_carry > 0 and pending:
        raise ParseError("unexpected end of input inside brackets",
                         pending[-1].line, pending[-1].column)
    while len(indent_stack) > 1:
        indent_stack.pop()
        tokens.append(Token("DEDENT", "", len(lines), 1))
    tokens.append(Token("EOF", "", len(lines), 1))
    return tokens
