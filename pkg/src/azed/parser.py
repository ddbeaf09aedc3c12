"""Text syntax for expressions: parsing and canonical printing.

Grammar:

    expr   := rule | native
    rule   := NAME "(" [expr ("," expr)*] ")"
    native := NUMBER | "@" PNAME | "#left" | "#right"
    NAME   := [a-z][a-z0-9-]*
    PNAME  := [A-Za-z][A-Za-z0-9-]*
    NUMBER := ["-"] digits ["." digits]

Whitespace between tokens is insignificant.  Pattern mode adds the two
leaves `_` (wildcard) and `?NAME` (variable).
"""

from __future__ import annotations

import re
from decimal import Decimal

from .model import (
    Expression,
    Num,
    Path,
    Pattern,
    Point,
    Rule,
    Side,
    Var,
    Wildcard,
    format_decimal,
    is_native,
)

_WS = " \t\r\n"
_NAME = re.compile(r"[a-z][a-z0-9-]*")
_POINT_NAME = re.compile(r"[A-Za-z][A-Za-z0-9-]*")
_NUMBER = re.compile(r"-?[0-9]+(\.[0-9]+)?")


class ParseError(Exception):
    def __init__(self, offset: int, expected: str, found: str):
        shown = found if found else "end of input"
        super().__init__(f"offset {offset}: expected {expected}, found {shown!r}")
        self.offset = offset
        self.expected = expected
        self.found = found


def parse(text: str) -> Expression:
    """Parse one expression; raises ParseError on malformed input."""
    expr, _ = _parse_full(text, patterns=False, spans=None)
    return expr


def parse_spans(text: str) -> tuple[Expression, dict[Path, tuple[int, int]]]:
    """Parse and also report each node's (start, end) text offsets by path."""
    spans: dict[Path, tuple[int, int]] = {}
    expr, _ = _parse_full(text, patterns=False, spans=spans)
    return expr, spans


def parse_pattern(text: str) -> Pattern:
    """Parse the expression grammar extended with `_` and `?name` leaves."""
    expr, _ = _parse_full(text, patterns=True, spans=None)
    return expr


def parse_prefix(text: str, pos: int, patterns: bool = False) -> tuple[Pattern, int]:
    """Parse one expression starting at `pos`; returns it and the offset of
    the first unconsumed character.  Used by the registry file reader."""
    p = _Parser(text, patterns, None)
    p.pos = pos
    p.skip_ws()
    expr = p.expr(())
    return expr, p.pos


def _parse_full(text, patterns, spans):
    p = _Parser(text, patterns, spans)
    p.skip_ws()
    expr = p.expr(())
    p.skip_ws()
    if p.pos != len(text):
        p.fail("end of input")
    return expr, p.pos


class _Parser:
    def __init__(self, text: str, patterns: bool, spans):
        self.text = text
        self.pos = 0
        self.patterns = patterns
        self.spans = spans

    def fail(self, expected: str):
        raise ParseError(self.pos, expected, self.text[self.pos : self.pos + 12])

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in _WS:
            self.pos += 1

    def take(self, regex, expected: str) -> str:
        m = regex.match(self.text, self.pos)
        if not m:
            self.fail(expected)
        self.pos = m.end()
        return m.group()

    def literal(self, token: str):
        if not self.text.startswith(token, self.pos):
            self.fail(f"{token!r}")
        self.pos += len(token)

    def expr(self, path: Path) -> Pattern:
        start = self.pos
        node = self._expr(path)
        if self.spans is not None:
            self.spans[path] = (start, self.pos)
        return node

    def _expr(self, path: Path) -> Pattern:
        if self.pos >= len(self.text):
            self.fail("expression")
        c = self.text[self.pos]
        if c == "@":
            self.pos += 1
            return Point(self.take(_POINT_NAME, "point name"))
        if c == "#":
            self.pos += 1
            word = self.take(_NAME, "'left' or 'right'")
            if word not in ("left", "right"):
                raise ParseError(self.pos - len(word), "'left' or 'right'", word)
            return Side(word)
        if c == "-" or c.isdigit():
            return Num(Decimal(self.take(_NUMBER, "number")))
        if self.patterns and c == "_":
            self.pos += 1
            return Wildcard()
        if self.patterns and c == "?":
            self.pos += 1
            return Var(self.take(_NAME, "variable name"))
        if c.isalpha() and c.islower():
            name = self.take(_NAME, "rule name")
            self.skip_ws()
            self.literal("(")
            children = self.arguments(path)
            return Rule(name, children)
        self.fail("expression")

    def arguments(self, path: Path) -> tuple:
        self.skip_ws()
        if self.text.startswith(")", self.pos):
            self.pos += 1
            return ()
        children = [self.expr(path + (0,))]
        self.skip_ws()
        while self.text.startswith(",", self.pos):
            self.pos += 1
            self.skip_ws()
            children.append(self.expr(path + (len(children),)))
            self.skip_ws()
        self.literal(")")
        return tuple(children)


def print_canonical(expr: Pattern) -> str:
    """Deterministic text form: no extra whitespace, children joined by
    ", ", numbers in shortest exact decimal form."""
    if isinstance(expr, Rule):
        return f"{expr.name}({', '.join(print_canonical(c) for c in expr.children)})"
    if isinstance(expr, Num):
        return format_decimal(expr.value)
    if isinstance(expr, Point):
        return f"@{expr.name}"
    if isinstance(expr, Side):
        return f"#{expr.side}"
    if isinstance(expr, Wildcard):
        return "_"
    if isinstance(expr, Var):
        return f"?{expr.name}"
    raise TypeError(f"not an expression: {expr!r}")


def print_native(expr: Expression) -> str:
    """Canonical text of a native leaf (used for layout labels)."""
    if not is_native(expr):
        raise TypeError(f"not a native node: {expr!r}")
    return print_canonical(expr)
