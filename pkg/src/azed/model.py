"""Expression trees for the AZee notation.

An expression is either the application of a named production rule to an
ordered list of argument expressions, or a native leaf: an exact decimal
number, a named point, or a body side.  Trees are immutable values, so
structural equality, undo and concurrent sharing all come for free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator, Union

NAME_RE = re.compile(r"[a-z][a-z0-9-]*\Z")
# Point names additionally allow an uppercase initial (Lssp, Rssp).
POINT_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9-]*\Z")

# Child indices from the root; the empty tuple addresses the root itself.
Path = tuple[int, ...]


class InvalidPath(Exception):
    def __init__(self, path: Path, reason: str = "no such node"):
        super().__init__(f"invalid path {format_path(path) or '<root>'}: {reason}")
        self.path = path


@dataclass(frozen=True)
class Rule:
    """Application of a named production rule to zero or more arguments."""

    name: str
    children: tuple["Expression", ...] = ()

    def __post_init__(self):
        if not NAME_RE.match(self.name):
            raise ValueError(f"bad rule name {self.name!r}")
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Num:
    """Exact decimal literal (scaled integer, never a binary float)."""

    value: Decimal

    def __post_init__(self):
        if not isinstance(self.value, Decimal):
            object.__setattr__(self, "value", Decimal(self.value))


@dataclass(frozen=True)
class Point:
    """Reference to a named point on the body or in signing space."""

    name: str

    def __post_init__(self):
        if not POINT_NAME_RE.match(self.name):
            raise ValueError(f"bad point name {self.name!r}")


@dataclass(frozen=True)
class Side:
    side: str  # "left" or "right"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"bad side {self.side!r}")


Expression = Union[Rule, Num, Point, Side]


# Pattern trees share the expression shape but allow two extra leaves.

@dataclass(frozen=True)
class Wildcard:
    """Matches any subtree, binds nothing.  Written `_`."""


@dataclass(frozen=True)
class Var:
    """Named pattern variable, written `?name`; repeated occurrences must
    bind structurally equal subtrees."""

    name: str

    def __post_init__(self):
        if not NAME_RE.match(self.name):
            raise ValueError(f"bad variable name {self.name!r}")


Pattern = Union[Rule, Num, Point, Side, Wildcard, Var]


def is_native(expr: Expression) -> bool:
    return isinstance(expr, (Num, Point, Side))


def children_of(expr: Expression) -> tuple[Expression, ...]:
    return expr.children if isinstance(expr, Rule) else ()


def node_at(expr: Expression, path: Path) -> Expression:
    """Subtree rooted at `path`; the empty path is the expression itself."""
    node = expr
    for depth, index in enumerate(path):
        kids = children_of(node)
        if not 0 <= index < len(kids):
            raise InvalidPath(tuple(path[: depth + 1]))
        node = kids[index]
    return node


def replace_at(expr: Expression, path: Path, sub: Expression) -> Expression:
    """New tree with the subtree at `path` replaced by `sub`."""
    if not path:
        return sub
    index = path[0]
    kids = children_of(expr)
    if not 0 <= index < len(kids):
        raise InvalidPath((index,))
    try:
        new_child = replace_at(kids[index], path[1:], sub)
    except InvalidPath as err:
        raise InvalidPath((index,) + err.path) from None
    return Rule(expr.name, kids[:index] + (new_child,) + kids[index + 1 :])


def size(expr: Expression) -> int:
    return 1 + sum(size(c) for c in children_of(expr))


def equal(a: Expression, b: Expression) -> bool:
    """Structural equality; numbers compare by exact decimal value."""
    return a == b


def iter_paths(expr: Expression, prefix: Path = ()) -> Iterator[tuple[Path, Expression]]:
    """Pre-order traversal: root first, children left to right."""
    yield prefix, expr
    for i, child in enumerate(children_of(expr)):
        yield from iter_paths(child, prefix + (i,))


def match(pattern: Pattern, expr: Expression) -> dict[str, Expression] | None:
    """Bindings if `pattern` matches `expr`, else None."""
    found = match_with_paths(pattern, expr)
    if found is None:
        return None
    return {name: sub for name, (_, sub) in found.items()}


def match_with_paths(
    pattern: Pattern, expr: Expression
) -> dict[str, tuple[Path, Expression]] | None:
    """Like `match`, but bindings also carry the bound subtree's path
    relative to `expr`."""
    bindings: dict[str, tuple[Path, Expression]] = {}
    if _match(pattern, expr, (), bindings):
        return bindings
    return None


def _match(pattern, expr, path: Path, bindings) -> bool:
    if isinstance(pattern, Wildcard):
        return True
    if isinstance(pattern, Var):
        if pattern.name in bindings:
            return bindings[pattern.name][1] == expr
        bindings[pattern.name] = (path, expr)
        return True
    if isinstance(pattern, Rule):
        if not isinstance(expr, Rule) or pattern.name != expr.name:
            return False
        if len(pattern.children) != len(expr.children):
            return False
        return all(
            _match(p, e, path + (i,), bindings)
            for i, (p, e) in enumerate(zip(pattern.children, expr.children))
        )
    return pattern == expr


def format_path(path: Path) -> str:
    """Dot-joined indices; the root is the empty string."""
    return ".".join(str(i) for i in path)


def parse_path(text: str) -> Path:
    if text == "":
        return ()
    parts = text.split(".")
    if not all(p.isdigit() for p in parts):
        raise ValueError(f"bad path {text!r}")
    return tuple(int(p) for p in parts)


def format_decimal(value: Decimal) -> str:
    """Shortest exact decimal form: no exponent, no trailing zeros."""
    text = format(value, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        text = "0"
    return text
