"""Documents, structural search, and validated editing with undo.

A document is an ordered list of expressions ("pieces") plus a history of
inverse operations.  Every edit type-checks the touched piece before it is
accepted, so a rejected edit leaves the document untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Expression,
    Path,
    Pattern,
    Rule,
    iter_paths,
    match,
    node_at,
    replace_at,
)
from .parser import parse_pattern
from .registry import Registry, TypeMismatch, UnknownRule, type_check

HISTORY_LIMIT = 1000


class SlotUnfillable(Exception):
    def __init__(self, rule: str, slot: int):
        super().__init__(f"no placeholder default for slot {slot} of {rule!r}")
        self.rule = rule
        self.slot = slot


class NothingToUndo(Exception):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    pieces: tuple[Expression, ...]
    # Inverse replace operations, most recent last, capped at HISTORY_LIMIT.
    history: tuple[tuple[int, Path, Expression], ...] = ()


@dataclass(frozen=True)
class Match:
    piece: int
    path: Path
    bindings: dict[str, Expression]


def new_document(doc_id: str, pieces, reg: Registry) -> Document:
    pieces = tuple(pieces)
    for piece in pieces:
        type_check(reg, piece)
    return Document(doc_id, pieces)


def compile_pattern(text: str) -> Pattern:
    """Expression grammar extended with `_` (wildcard) and `?name`
    (variable; repeated occurrences must bind equal subtrees)."""
    return parse_pattern(text)


def query(doc: Document, pattern: Pattern) -> list[Match]:
    """All matches, pieces in order, pre-order within each piece."""
    found = []
    for index, piece in enumerate(doc.pieces):
        for path, node in iter_paths(piece):
            bindings = match(pattern, node)
            if bindings is not None:
                found.append(Match(index, path, bindings))
    return found


def _check_piece_index(doc: Document, piece: int):
    if not 0 <= piece < len(doc.pieces):
        raise IndexError(f"piece {piece} out of range")


def _commit(doc: Document, piece: int, path: Path, new_piece: Expression, prior: Expression) -> Document:
    pieces = doc.pieces[:piece] + (new_piece,) + doc.pieces[piece + 1 :]
    history = (doc.history + ((piece, path, prior),))[-HISTORY_LIMIT:]
    return Document(doc.id, pieces, history)


def edit_replace(doc: Document, reg: Registry, piece: int, path: Path, expr: Expression) -> Document:
    """Replace the subtree at (piece, path); rejected atomically if the
    resulting piece does not type-check."""
    _check_piece_index(doc, piece)
    prior = node_at(doc.pieces[piece], path)
    new_piece = replace_at(doc.pieces[piece], path, expr)
    type_check(reg, new_piece)
    return _commit(doc, piece, path, new_piece, prior)


def edit_wrap(doc: Document, reg: Registry, piece: int, path: Path, rule: str, slot: int) -> Document:
    """Wrap the subtree at (piece, path) as argument `slot` of `rule`.
    Slots other than `slot` would need declared placeholder defaults; the
    registry format declares none, so only single-slot rules can wrap."""
    _check_piece_index(doc, piece)
    rdef = reg.rules.get(rule)
    if rdef is None:
        raise UnknownRule(path, rule)
    arity = rdef.min_arity()
    if not 0 <= slot < arity:
        raise SlotUnfillable(rule, slot)
    for other in range(arity):
        if other != slot:
            raise SlotUnfillable(rule, other)

    target = node_at(doc.pieces[piece], path)
    slot_type = rdef.params[slot].type if slot < len(rdef.params) else rdef.variadic.type
    target_type = type_check(reg, target)
    if target_type != slot_type:
        raise TypeMismatch(path, slot_type.value, target_type.value)

    new_piece = replace_at(doc.pieces[piece], path, Rule(rule, (target,)))
    type_check(reg, new_piece)
    return _commit(doc, piece, path, new_piece, target)


def undo(doc: Document) -> Document:
    """Reverse the most recent edit exactly."""
    if not doc.history:
        raise NothingToUndo("empty history")
    piece, path, prior = doc.history[-1]
    restored = replace_at(doc.pieces[piece], path, prior)
    pieces = doc.pieces[:piece] + (restored,) + doc.pieces[piece + 1 :]
    return Document(doc.id, pieces, doc.history[:-1])
