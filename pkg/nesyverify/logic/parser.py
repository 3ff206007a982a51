"""Recursive-descent parser for the formula expression language.

Grammar (lowest to highest precedence)::

    iff     := implies ('<->' implies)*          left-associative
    implies := or ('->' implies)?                right-associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | atom
    atom    := IDENT | 'true' | 'false' | '(' iff ')'

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*``. ``#`` starts a comment that
runs to the end of the line. Fresh variables are registered in the pool in
order of first appearance.
"""
import re
from dataclasses import dataclass
from typing import Optional

from nesyverify.logic.formula import (
    FALSE,
    TRUE,
    And,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    VariablePool,
)
from nesyverify.utils.errors import FormulaSyntaxError

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><->|->|[!&|()])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "op" or "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "op"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], pool: VariablePool):
        self._tokens = tokens
        self._pos = 0
        self._pool = pool

    @property
    def _peek(self) -> Token:
        return self._tokens[self._pos]

    def _accept(self, op: str) -> bool:
        tok = self._peek
        if tok.kind == "op" and tok.text == op:
            self._pos += 1
            return True
        return False

    def _fail(self, message: str) -> FormulaSyntaxError:
        tok = self._peek
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return FormulaSyntaxError(f"{message}, found {found}", tok.line, tok.column)

    def parse(self) -> Formula:
        if self._peek.kind == "eof":
            raise FormulaSyntaxError("empty formula", self._peek.line, self._peek.column)
        f = self._iff()
        if self._peek.kind != "eof":
            raise self._fail("expected an operator")
        return f

    def _iff(self) -> Formula:
        left = self._implies()
        while self._accept("<->"):
            left = Iff(left, self._implies())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        if self._accept("->"):
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        children = [self._and()]
        while self._accept("|"):
            children.append(self._and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def _and(self) -> Formula:
        children = [self._unary()]
        while self._accept("&"):
            children.append(self._unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def _unary(self) -> Formula:
        if self._accept("!"):
            return Not(self._unary())
        return self._atom()

    def _atom(self) -> Formula:
        tok = self._peek
        if tok.kind == "ident":
            self._pos += 1
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            return Var(self._pool.get_or_create(tok.text))
        if self._accept("("):
            inner = self._iff()
            if not self._accept(")"):
                raise self._fail("expected ')'")
            return inner
        raise self._fail("expected an operand")


def parse_formula(text: str, pool: Optional[VariablePool] = None) -> Formula:
    """Parse expression text into a formula, registering variables in ``pool``."""
    if pool is None:
        pool = VariablePool()
    return _Parser(tokenize(text), pool).parse()
