"""Planar glyph layout: template rewriting, recursive box typesetting,
scene graphs with hit-test paths, and deterministic SVG export.

All metrics are in em units and exact decimals.  Every layout box emits a
structural bounding rectangle tagged with its source path, so ancestor
boxes always contain their descendants and every expression node is
reachable from the scene.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import Decimal
from typing import Union

from .model import Expression, Path, Rule, format_path, is_native, match_with_paths
from .parser import print_native
from .registry import (
    GlyphAtom,
    GlyphBulletList,
    GlyphContextBar,
    GlyphInfix,
    GlyphOvermark,
    Registry,
)

EM = Decimal(1)
TEXT_SIZE = Decimal("0.6")   # rule-name and native text
INFIX_GAP = Decimal("0.25")
MARK_SIZE = Decimal("0.5")
MARK_GAP = Decimal("0.1")
BAR_GAP = Decimal("0.15")
ROW_GAP = Decimal("0.2")
BULLET_GAP = Decimal("0.25")
FRAME_PAD = Decimal("0.2")
NAME_GAP = Decimal("0.1")
UNITS_PER_EM = Decimal(16)

TWO = Decimal(2)
ZERO = Decimal(0)


# --- layout tree -------------------------------------------------------------

@dataclass(frozen=True)
class AtomBox:
    text: str
    source: Path


@dataclass(frozen=True)
class InfixBox:
    left: "LayoutNode"
    sep: str
    right: "LayoutNode"
    source: Path


@dataclass(frozen=True)
class OvermarkBox:
    mark: str
    child: "LayoutNode"
    source: Path


@dataclass(frozen=True)
class ContextBarBox:
    top: "LayoutNode"
    bottom: "LayoutNode"
    source: Path


@dataclass(frozen=True)
class BulletListBox:
    bullet: str
    items: tuple["LayoutNode", ...]
    source: Path


@dataclass(frozen=True)
class SideBySideBox:
    """Compound box from a matched template.  `consumed` lists, in pattern
    pre-order, the absolute paths of the non-root pattern nodes the match
    swallowed, each with the sides ("left"/"right") bound beneath it
    (possibly none).  The layout emits a structural rectangle per consumed
    node so those nodes stay reachable from the scene."""

    left: "LayoutNode"
    sep: str
    right: "LayoutNode"
    source: Path
    consumed: tuple[tuple[Path, tuple[str, ...]], ...]


@dataclass(frozen=True)
class NameFrameBox:
    name: str
    children: tuple["LayoutNode", ...]
    source: Path


@dataclass(frozen=True)
class NativeBox:
    text: str
    source: Path


LayoutNode = Union[
    AtomBox, InfixBox, OvermarkBox, ContextBarBox, BulletListBox,
    SideBySideBox, NameFrameBox, NativeBox,
]


# --- scene graph -------------------------------------------------------------

@dataclass(frozen=True)
class GlyphRun:
    x: Decimal
    y: Decimal
    size: Decimal  # em height; width is size per code point
    text: str
    source: Path


@dataclass(frozen=True)
class Line:
    x1: Decimal
    y1: Decimal
    x2: Decimal
    y2: Decimal
    source: Path


@dataclass(frozen=True)
class Rect:
    x: Decimal
    y: Decimal
    w: Decimal
    h: Decimal
    frame: bool
    source: Path


SceneElement = Union[GlyphRun, Line, Rect]


@dataclass(frozen=True)
class SceneGraph:
    width: Decimal
    height: Decimal
    elements: tuple[SceneElement, ...]


def element_bbox(el: SceneElement) -> tuple[Decimal, Decimal, Decimal, Decimal]:
    if isinstance(el, GlyphRun):
        return el.x, el.y, el.x + el.size * len(el.text), el.y + el.size
    if isinstance(el, Line):
        return min(el.x1, el.x2), min(el.y1, el.y2), max(el.x1, el.x2), max(el.y1, el.y2)
    return el.x, el.y, el.x + el.w, el.y + el.h


# --- template rewriting ------------------------------------------------------

def apply_templates(reg: Registry, expr: Expression) -> LayoutNode:
    """Top-down template rewrite; non-matching nodes fall back to their
    rule's glyph, then to a name frame.  Total: never fails."""
    return _build(reg, expr, ())


def _build(reg: Registry, expr: Expression, path: Path) -> LayoutNode:
    if is_native(expr):
        return NativeBox(print_native(expr), path)

    for template in reg.templates:
        bound = match_with_paths(template.pattern, expr)
        if bound is None:
            continue
        first, second = template.slots
        sides = {first: "left", second: "right"}
        consumed = []
        for rel, _node in _pattern_nodes(template.pattern):
            if rel == ():
                continue
            under = tuple(
                sides[slot] for slot in template.slots if bound[slot][0][: len(rel)] == rel
            )
            consumed.append((path + rel, under))
        return SideBySideBox(
            _build(reg, bound[first][1], path + bound[first][0]),
            template.glyph.text,
            _build(reg, bound[second][1], path + bound[second][0]),
            path,
            tuple(consumed),
        )

    rdef = reg.rules.get(expr.name)
    glyph = rdef.glyph if rdef else None
    kids = expr.children
    built = lambda i: _build(reg, kids[i], path + (i,))

    if isinstance(glyph, GlyphAtom) and not kids:
        return AtomBox(glyph.text, path)
    if isinstance(glyph, GlyphInfix) and len(kids) == 2:
        return InfixBox(built(0), glyph.text, built(1), path)
    if isinstance(glyph, GlyphOvermark) and len(kids) == 1:
        return OvermarkBox(glyph.text, built(0), path)
    if isinstance(glyph, GlyphContextBar) and len(kids) == 2:
        return ContextBarBox(built(0), built(1), path)
    if isinstance(glyph, GlyphBulletList):
        return BulletListBox(glyph.text, tuple(built(i) for i in range(len(kids))), path)
    return NameFrameBox(expr.name, tuple(built(i) for i in range(len(kids))), path)


def _pattern_nodes(pattern, prefix: Path = ()):
    from .model import Var, children_of

    if isinstance(pattern, Var):
        return
    yield prefix, pattern
    for i, child in enumerate(children_of(pattern)):
        yield from _pattern_nodes(child, prefix + (i,))


# --- box metrics -------------------------------------------------------------

def layout(reg: Registry, expr: Expression) -> SceneGraph:
    """Deterministic recursive layout of an expression."""
    return layout_node(apply_templates(reg, expr))


def layout_node(box: LayoutNode) -> SceneGraph:
    w, h, elements = _render(box)
    return SceneGraph(w, h, tuple(elements))


def _shift(elements, dx: Decimal, dy: Decimal):
    out = []
    for el in elements:
        if isinstance(el, GlyphRun):
            out.append(replace(el, x=el.x + dx, y=el.y + dy))
        elif isinstance(el, Line):
            out.append(replace(el, x1=el.x1 + dx, y1=el.y1 + dy, x2=el.x2 + dx, y2=el.y2 + dy))
        else:
            out.append(replace(el, x=el.x + dx, y=el.y + dy))
    return out


def _text_box(text: str, size: Decimal, source: Path):
    w = size * len(text)
    return w, size, [Rect(ZERO, ZERO, w, size, False, source), GlyphRun(ZERO, ZERO, size, text, source)]


def _pair_row(box, lw, lh, le, rw, rh, re):
    """Shared metric for infix and side-by-side rows; returns geometry so
    the caller can place extra elements."""
    sep_w = EM * len(box.sep)
    h = max(lh, EM, rh)
    w = lw + INFIX_GAP + sep_w + INFIX_GAP + rw
    lx, ly = ZERO, (h - lh) / TWO
    sx, sy = lw + INFIX_GAP, (h - EM) / TWO
    rx, ry = sx + sep_w + INFIX_GAP, (h - rh) / TWO
    sep_run = GlyphRun(sx, sy, EM, box.sep, box.source)
    return w, h, (lx, ly), (rx, ry), sep_run


def _render(box: LayoutNode):
    if isinstance(box, AtomBox):
        return _text_box(box.text, EM, box.source)

    if isinstance(box, NativeBox):
        return _text_box(box.text, TEXT_SIZE, box.source)

    if isinstance(box, (InfixBox, SideBySideBox)):
        lw, lh, le = _render(box.left)
        rw, rh, re = _render(box.right)
        w, h, (lx, ly), (rx, ry), sep_run = _pair_row(box, lw, lh, le, rw, rh, re)
        elements = [Rect(ZERO, ZERO, w, h, False, box.source)]
        if isinstance(box, SideBySideBox):
            side_bbox = {
                "left": (lx, ly, lx + lw, ly + lh),
                "right": (rx, ry, rx + rw, ry + rh),
            }
            regions: dict[Path, tuple] = {box.source: (ZERO, ZERO, w, h)}
            for path, under in box.consumed:
                if under:
                    boxes = [side_bbox[s] for s in under]
                    region = (
                        min(b[0] for b in boxes),
                        min(b[1] for b in boxes),
                        max(b[2] for b in boxes),
                        max(b[3] for b in boxes),
                    )
                else:
                    # no bound content below: inherit the nearest ancestor
                    region = regions[max(
                        (p for p in regions if path[: len(p)] == p), key=len
                    )]
                regions[path] = region
                x0, y0, x1, y1 = region
                elements.append(Rect(x0, y0, x1 - x0, y1 - y0, False, path))
        elements += _shift(le, lx, ly)
        elements.append(sep_run)
        elements += _shift(re, rx, ry)
        return w, h, elements

    if isinstance(box, OvermarkBox):
        cw, ch, ce = _render(box.child)
        mark_w = MARK_SIZE * len(box.mark)
        w = max(cw, mark_w)
        h = MARK_SIZE + MARK_GAP + ch
        elements = [
            Rect(ZERO, ZERO, w, h, False, box.source),
            GlyphRun((w - mark_w) / TWO, ZERO, MARK_SIZE, box.mark, box.source),
        ]
        elements += _shift(ce, (w - cw) / TWO, MARK_SIZE + MARK_GAP)
        return w, h, elements

    if isinstance(box, ContextBarBox):
        tw, th, te = _render(box.top)
        bw, bh, be = _render(box.bottom)
        w = max(tw, bw)
        bar_y = th + BAR_GAP
        h = bar_y + BAR_GAP + bh
        elements = [Rect(ZERO, ZERO, w, h, False, box.source)]
        elements += _shift(te, (w - tw) / TWO, ZERO)
        elements.append(Line(ZERO, bar_y, w, bar_y, box.source))
        elements += _shift(be, (w - bw) / TWO, bar_y + BAR_GAP)
        return w, h, elements

    if isinstance(box, BulletListBox):
        bullet_w = EM * len(box.bullet)
        rendered = [_render(item) for item in box.items]
        w = bullet_w + BULLET_GAP + max((iw for iw, _, _ in rendered), default=ZERO)
        elements: list[SceneElement] = []
        y = ZERO
        for i, (iw, ih, ie) in enumerate(rendered):
            if i:
                y += ROW_GAP
            row_h = max(EM, ih)
            elements.append(
                GlyphRun(ZERO, y + (row_h - EM) / TWO, EM, box.bullet, box.source)
            )
            elements += _shift(ie, bullet_w + BULLET_GAP, y + (row_h - ih) / TWO)
            y += row_h
        h = y
        return w, h, [Rect(ZERO, ZERO, w, h, False, box.source)] + elements

    if isinstance(box, NameFrameBox):
        name_w = TEXT_SIZE * len(box.name)
        rendered = [_render(child) for child in box.children]
        row_h = max((ch for _, ch, _ in rendered), default=ZERO)
        row_w = sum((cw for cw, _, _ in rendered), ZERO)
        if rendered:
            row_w += INFIX_GAP * (len(rendered) - 1)
        content_w = max(name_w, row_w)
        content_h = TEXT_SIZE + (NAME_GAP + row_h if rendered else ZERO)
        w = content_w + TWO * FRAME_PAD
        h = content_h + TWO * FRAME_PAD
        elements = [
            Rect(ZERO, ZERO, w, h, True, box.source),
            GlyphRun(FRAME_PAD + (content_w - name_w) / TWO, FRAME_PAD, TEXT_SIZE, box.name, box.source),
        ]
        x = FRAME_PAD + (content_w - row_w) / TWO
        row_y = FRAME_PAD + TEXT_SIZE + NAME_GAP
        for cw, ch, ce in rendered:
            elements += _shift(ce, x, row_y + (row_h - ch) / TWO)
            x += cw + INFIX_GAP
        return w, h, elements

    raise TypeError(f"not a layout node: {box!r}")


# --- SVG export and hit testing ----------------------------------------------

def _units(value: Decimal) -> str:
    from .model import format_decimal

    scaled = (value * UNITS_PER_EM).quantize(Decimal("0.01"))
    return format_decimal(scaled)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def to_svg(scene: SceneGraph) -> str:
    """SVG 1.1 text, 1 em = 16 user units, coordinates rounded to two
    decimals, elements in painter's order, each tagged with its source
    path in a `data-path` attribute.  Byte-identical for equal scenes."""
    view = f'viewBox="0 0 {_units(scene.width)} {_units(scene.height)}"'
    if not scene.elements:
        return f'<svg xmlns="http://www.w3.org/2000/svg" {view}/>\n'
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" {view} font-size="16">']
    for el in scene.elements:
        path = format_path(el.source)
        if isinstance(el, GlyphRun):
            parts.append(
                f'<text x="{_units(el.x)}" y="{_units(el.y + el.size)}"'
                f' font-size="{_units(el.size)}" data-path="{path}">'
                f"{_escape(el.text)}</text>"
            )
        elif isinstance(el, Line):
            parts.append(
                f'<line x1="{_units(el.x1)}" y1="{_units(el.y1)}"'
                f' x2="{_units(el.x2)}" y2="{_units(el.y2)}"'
                f' stroke="black" stroke-width="1" data-path="{path}"/>'
            )
        else:
            stroke = "black" if el.frame else "none"
            parts.append(
                f'<rect x="{_units(el.x)}" y="{_units(el.y)}"'
                f' width="{_units(el.w)}" height="{_units(el.h)}"'
                f' fill="none" stroke="{stroke}" stroke-width="1" data-path="{path}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def hit_test(scene: SceneGraph, x, y) -> Path | None:
    """Source path of the deepest element (longest path; ties to the later
    painted one) whose bounding box contains (x, y); None if outside all."""
    best_key = None
    best_path = None
    for index, el in enumerate(scene.elements):
        x0, y0, x1, y1 = element_bbox(el)
        if x0 <= x <= x1 and y0 <= y <= y1:
            key = (len(el.source), index)
            if best_key is None or key > best_key:
                best_key = key
                best_path = el.source
    return best_path


def scene_to_json(scene: SceneGraph) -> dict:
    """Wire form of a scene: plain floats, dotted source paths."""
    elements = []
    for el in scene.elements:
        if isinstance(el, GlyphRun):
            item = {
                "kind": "glyphrun",
                "x": float(el.x),
                "y": float(el.y),
                "size": float(el.size),
                "text": el.text,
            }
        elif isinstance(el, Line):
            item = {
                "kind": "line",
                "x1": float(el.x1),
                "y1": float(el.y1),
                "x2": float(el.x2),
                "y2": float(el.y2),
            }
        else:
            item = {
                "kind": "rect",
                "x": float(el.x),
                "y": float(el.y),
                "w": float(el.w),
                "h": float(el.h),
                "frame": el.frame,
            }
        item["source"] = format_path(el.source)
        elements.append(item)
    return {"width": float(scene.width), "height": float(scene.height), "elements": elements}
