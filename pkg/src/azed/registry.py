"""Production-rule registry: typed signatures, score-template bodies, glyph
assignments, the point catalog, and multi-node layout templates.

Registry files are line-oriented UTF-8 with `#` comments:

    point Lssp
    rule dog() = block({rhand,lhand}, "lsf:dog", 1.0) glyph atom "U+1F415"
    rule non-subjectivity(x: score) = sync(x, block({mouth}, "lip-pout", dur(x) + 0.3), -0.15) glyph overmark "U+2713"
    rule each-of(items: score... min 2) = seq(items) glyph bulletlist "U+2022"
    template opposition = each-of(localised-discourse(@Lssp, ?a), localised-discourse(@Rssp, ?b)) glyph sidebyside "U+2194"

Glyph code points are written `"U+XXXX"`, one or more space-separated.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Union

from . import parser as _parser
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
    format_path,
    iter_paths,
)
from .score import (
    BlockTemplate,
    DurBin,
    DurExpr,
    DurLit,
    DurOf,
    DurParam,
    HoldTemplate,
    ParamRef,
    ScoreTemplate,
    SeqTemplate,
    SyncTemplate,
    Track,
)


class RegistryError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ParamType(enum.Enum):
    SCORE = "score"
    POINT = "point"
    NUMBER = "number"
    SIDE = "side"


@dataclass(frozen=True)
class Param:
    name: str
    type: ParamType


@dataclass(frozen=True)
class GlyphAtom:
    text: str


@dataclass(frozen=True)
class GlyphInfix:
    text: str


@dataclass(frozen=True)
class GlyphOvermark:
    text: str


@dataclass(frozen=True)
class GlyphContextBar:
    pass


@dataclass(frozen=True)
class GlyphBulletList:
    text: str


@dataclass(frozen=True)
class GlyphNameFrame:
    pass


GlyphSpec = Union[
    GlyphAtom, GlyphInfix, GlyphOvermark, GlyphContextBar, GlyphBulletList, GlyphNameFrame
]


@dataclass(frozen=True)
class SideBySide:
    text: str


@dataclass(frozen=True)
class Template:
    """A multi-node pattern abstracted into one compound glyph operator.
    `slots` are the two distinct pattern variables, in order of first
    appearance."""

    name: str
    pattern: Pattern
    glyph: SideBySide
    slots: tuple[str, str]


@dataclass(frozen=True)
class RuleDef:
    name: str
    params: tuple[Param, ...]
    variadic: Param | None
    variadic_min: int
    body: ScoreTemplate
    glyph: GlyphSpec | None

    def min_arity(self) -> int:
        return len(self.params) + (self.variadic_min if self.variadic else 0)


@dataclass(frozen=True)
class Registry:
    rules: dict[str, RuleDef] = field(default_factory=dict)
    points: tuple[str, ...] = ()
    templates: tuple[Template, ...] = ()


# --- loading -----------------------------------------------------------------

_CODEPOINT = re.compile(r"U\+([0-9A-Fa-f]{1,6})\Z")
_KEYWORDS = ("block", "seq", "sync", "hold")


class _Cursor:
    """Single-line token cursor; all errors carry the declaration's line."""

    def __init__(self, text: str, line: int):
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str):
        raise RegistryError(self.line, message)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def peek(self, token: str) -> bool:
        self.ws()
        return self.text.startswith(token, self.pos)

    def eat(self, token: str) -> bool:
        if self.peek(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.eat(token):
            self.error(f"expected {token!r}")

    def take(self, regex: re.Pattern, what: str) -> str:
        self.ws()
        m = regex.match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def name(self) -> str:
        return self.take(_parser._NAME, "a name")

    def number(self) -> Decimal:
        return Decimal(self.take(_parser._NUMBER, "a number"))

    def quoted(self) -> str:
        self.ws()
        if not self.eat('"'):
            self.error("expected a quoted string")
        end = self.text.find('"', self.pos)
        if end < 0:
            self.error("unterminated string")
        value = self.text[self.pos : end]
        self.pos = end + 1
        return value


def _decode_codepoints(raw: str, cur: _Cursor) -> str:
    chars = []
    for token in raw.split():
        m = _CODEPOINT.match(token)
        if not m:
            cur.error(f"bad code point {token!r}, expected U+XXXX")
        chars.append(chr(int(m.group(1), 16)))
    if not chars:
        cur.error("empty code point string")
    return "".join(chars)


def _parse_params(cur: _Cursor) -> tuple[tuple[Param, ...], Param | None, int]:
    cur.expect("(")
    params: list[Param] = []
    variadic: Param | None = None
    variadic_min = 0
    if not cur.eat(")"):
        while True:
            pname = cur.name()
            cur.expect(":")
            ptype = _param_type(cur)
            if cur.eat("..."):
                cur.ws()
                cur.expect("min")
                variadic_min = int(cur.take(re.compile(r"[0-9]+"), "a count"))
                variadic = Param(pname, ptype)
                cur.expect(")")
                break
            params.append(Param(pname, ptype))
            if cur.eat(")"):
                break
            cur.expect(",")
    names = [p.name for p in params] + ([variadic.name] if variadic else [])
    if len(set(names)) != len(names):
        cur.error("duplicate parameter name")
    return tuple(params), variadic, variadic_min


def _param_type(cur: _Cursor) -> ParamType:
    word = cur.name()
    try:
        return ParamType(word)
    except ValueError:
        cur.error(f"unknown parameter type {word!r}")


def _parse_body(cur: _Cursor) -> ScoreTemplate:
    word = cur.name()
    if word in _KEYWORDS and cur.peek("("):
        if word == "block":
            cur.expect("(")
            tracks = _parse_tracks(cur)
            cur.expect(",")
            label = cur.quoted()
            cur.expect(",")
            dur = _parse_durexpr(cur)
            cur.expect(")")
            return BlockTemplate(tracks, label, dur)
        if word == "seq":
            cur.expect("(")
            items = [_parse_body(cur)]
            while cur.eat(","):
                items.append(_parse_body(cur))
            cur.expect(")")
            return SeqTemplate(tuple(items))
        if word == "sync":
            cur.expect("(")
            base = _parse_body(cur)
            cur.expect(",")
            overlay = _parse_body(cur)
            cur.expect(",")
            offset = _parse_durexpr(cur)
            cur.expect(")")
            return SyncTemplate(base, overlay, offset)
        cur.expect("(")
        dur = _parse_durexpr(cur)
        cur.expect(")")
        return HoldTemplate(dur)
    return ParamRef(word)


def _parse_tracks(cur: _Cursor) -> frozenset[Track]:
    cur.expect("{")
    tracks = set()
    while True:
        word = cur.name()
        try:
            tracks.add(Track(word))
        except ValueError:
            cur.error(f"unknown track {word!r}")
        if cur.eat("}"):
            break
        cur.expect(",")
    return frozenset(tracks)


def _parse_durexpr(cur: _Cursor) -> DurExpr:
    expr = _parse_durterm(cur)
    while True:
        if cur.eat("+"):
            expr = DurBin("+", expr, _parse_durterm(cur))
        elif cur.eat("-"):
            expr = DurBin("-", expr, _parse_durterm(cur))
        else:
            return expr


def _parse_durterm(cur: _Cursor) -> DurExpr:
    cur.ws()
    if cur.pos < len(cur.text) and (cur.text[cur.pos].isdigit() or cur.text[cur.pos] == "-"):
        return DurLit(cur.number())
    word = cur.name()
    if word == "dur" and cur.peek("("):
        cur.expect("(")
        param = cur.name()
        cur.expect(")")
        return DurOf(param)
    return DurParam(word)


def _parse_glyph(cur: _Cursor) -> GlyphSpec:
    kind = cur.name()
    if kind == "atom":
        return GlyphAtom(_decode_codepoints(cur.quoted(), cur))
    if kind == "infix":
        return GlyphInfix(_decode_codepoints(cur.quoted(), cur))
    if kind == "overmark":
        return GlyphOvermark(_decode_codepoints(cur.quoted(), cur))
    if kind == "contextbar":
        return GlyphContextBar()
    if kind == "bulletlist":
        return GlyphBulletList(_decode_codepoints(cur.quoted(), cur))
    if kind == "nameframe":
        return GlyphNameFrame()
    cur.error(f"unknown glyph kind {kind!r}")


def load_registry(text: str) -> Registry:
    """Parse and validate a registry file; raises RegistryError with the
    offending line number."""
    rules: dict[str, RuleDef] = {}
    rule_lines: dict[str, int] = {}
    points: list[str] = []
    templates: list[Template] = []
    template_lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cur = _Cursor(raw, lineno)
        keyword = cur.name()
        if keyword == "point":
            pname = cur.take(_parser._POINT_NAME, "a point name")
            if pname in points:
                cur.error(f"duplicate point {pname!r}")
            points.append(pname)
        elif keyword == "rule":
            rname = cur.name()
            if rname in rules:
                cur.error(f"duplicate rule {rname!r}")
            params, variadic, variadic_min = _parse_params(cur)
            cur.expect("=")
            body = _parse_body(cur)
            glyph = None
            if cur.eat("glyph"):
                glyph = _parse_glyph(cur)
            rdef = RuleDef(rname, params, variadic, variadic_min, body, glyph)
            _validate_rule(rdef, cur)
            rules[rname] = rdef
            rule_lines[rname] = lineno
        elif keyword == "template":
            tname = cur.name()
            if tname in template_lines:
                cur.error(f"duplicate template {tname!r}")
            cur.expect("=")
            try:
                pattern, end = _parser.parse_prefix(cur.text, cur.pos, patterns=True)
            except _parser.ParseError as err:
                cur.error(f"bad template pattern: {err}")
            cur.pos = end
            cur.expect("glyph")
            gkind = cur.name()
            if gkind != "sidebyside":
                cur.error(f"unknown template glyph {gkind!r}")
            glyph = SideBySide(_decode_codepoints(cur.quoted(), cur))
            slots = _template_slots(pattern, cur)
            templates.append(Template(tname, pattern, glyph, slots))
            template_lines[tname] = lineno
        else:
            cur.error(f"unknown declaration {keyword!r}")
        if not cur.at_end():
            cur.error(f"trailing input {cur.text[cur.pos:].strip()!r}")

    reg = Registry(rules, tuple(points), tuple(templates))
    _validate_registry(reg, rule_lines, template_lines)
    return reg


def _validate_rule(rdef: RuleDef, cur: _Cursor):
    types = {p.name: p.type for p in rdef.params}
    if rdef.variadic:
        types[rdef.variadic.name] = rdef.variadic.type

    def check_dur(expr: DurExpr):
        if isinstance(expr, DurOf):
            if types.get(expr.param) != ParamType.SCORE:
                cur.error(f"dur({expr.param}) needs a score parameter")
            if rdef.variadic and expr.param == rdef.variadic.name:
                cur.error(f"dur({expr.param}) cannot take the variadic parameter")
        elif isinstance(expr, DurParam):
            if types.get(expr.param) != ParamType.NUMBER:
                cur.error(f"duration reference {expr.param!r} is not a number parameter")
        elif isinstance(expr, DurBin):
            check_dur(expr.left)
            check_dur(expr.right)

    def check(node: ScoreTemplate, under_seq: bool):
        if isinstance(node, BlockTemplate):
            check_dur(node.dur)
            for ref in re.findall(r"\{([a-z][a-z0-9-]*)\}", node.label):
                if types.get(ref) not in (ParamType.POINT, ParamType.SIDE):
                    cur.error(f"label splice {{{ref}}} is not a point or side parameter")
        elif isinstance(node, SeqTemplate):
            for item in node.items:
                check(item, under_seq=True)
        elif isinstance(node, SyncTemplate):
            check(node.base, False)
            check(node.overlay, False)
            check_dur(node.offset)
        elif isinstance(node, HoldTemplate):
            check_dur(node.dur)
        elif isinstance(node, ParamRef):
            if node.name not in types:
                cur.error(f"unbound parameter {node.name!r} in body")
            if rdef.variadic and node.name == rdef.variadic.name:
                if not under_seq:
                    cur.error("variadic parameter may only appear directly under seq")
            elif types[node.name] != ParamType.SCORE:
                cur.error(f"parameter {node.name!r} used as a score but typed {types[node.name].value}")

    check(rdef.body, under_seq=False)

    fixed = len(rdef.params)
    glyph = rdef.glyph
    if isinstance(glyph, GlyphAtom) and (fixed or rdef.variadic):
        cur.error("glyph atom requires a zero-argument rule")
    if isinstance(glyph, GlyphInfix) and (fixed != 2 or rdef.variadic):
        cur.error("glyph infix requires exactly two parameters")
    if isinstance(glyph, GlyphOvermark) and (fixed != 1 or rdef.variadic):
        cur.error("glyph overmark requires exactly one parameter")
    if isinstance(glyph, GlyphContextBar) and (fixed != 2 or rdef.variadic):
        cur.error("glyph contextbar requires exactly two parameters")


def _template_slots(pattern: Pattern, cur: _Cursor) -> tuple[str, str]:
    seen: list[str] = []
    for _, node in iter_paths(pattern):
        if isinstance(node, Wildcard):
            cur.error("wildcards are not allowed in template patterns")
        if isinstance(node, Var) and node.name not in seen:
            seen.append(node.name)
    if len(seen) != 2:
        cur.error("sidebyside template needs exactly two pattern variables")
    return (seen[0], seen[1])


def _validate_registry(reg: Registry, rule_lines, template_lines):
    for template in reg.templates:
        line = template_lines[template.name]
        for _, node in iter_paths(template.pattern):
            if isinstance(node, Rule) and node.name not in reg.rules:
                raise RegistryError(line, f"template references unknown rule {node.name!r}")
            if isinstance(node, Point) and node.name not in reg.points:
                raise RegistryError(line, f"template references undeclared point {node.name!r}")


# --- serialization (internal, exercised by the round-trip tests) -------------

def print_registry(reg: Registry) -> str:
    lines = [f"point {p}" for p in reg.points]
    for rdef in reg.rules.values():
        sig = ", ".join(f"{p.name}: {p.type.value}" for p in rdef.params)
        if rdef.variadic:
            extra = f"{rdef.variadic.name}: {rdef.variadic.type.value}... min {rdef.variadic_min}"
            sig = f"{sig}, {extra}" if sig else extra
        text = f"rule {rdef.name}({sig}) = {_print_body(rdef.body)}"
        if rdef.glyph is not None:
            text += f" glyph {_print_glyph(rdef.glyph)}"
        lines.append(text)
    for template in reg.templates:
        lines.append(
            f"template {template.name} = {_parser.print_canonical(template.pattern)}"
            f" glyph sidebyside {_encode_codepoints(template.glyph.text)}"
        )
    return "\n".join(lines) + "\n"


def _encode_codepoints(text: str) -> str:
    return '"' + " ".join(f"U+{ord(c):04X}" for c in text) + '"'


def _print_glyph(glyph: GlyphSpec) -> str:
    if isinstance(glyph, GlyphAtom):
        return f"atom {_encode_codepoints(glyph.text)}"
    if isinstance(glyph, GlyphInfix):
        return f"infix {_encode_codepoints(glyph.text)}"
    if isinstance(glyph, GlyphOvermark):
        return f"overmark {_encode_codepoints(glyph.text)}"
    if isinstance(glyph, GlyphContextBar):
        return "contextbar"
    if isinstance(glyph, GlyphBulletList):
        return f"bulletlist {_encode_codepoints(glyph.text)}"
    return "nameframe"


def _print_body(body: ScoreTemplate) -> str:
    if isinstance(body, BlockTemplate):
        tracks = ",".join(t.value for t in Track if t in body.tracks)
        return f'block({{{tracks}}}, "{body.label}", {_print_dur(body.dur)})'
    if isinstance(body, SeqTemplate):
        return f"seq({', '.join(_print_body(i) for i in body.items)})"
    if isinstance(body, SyncTemplate):
        return (
            f"sync({_print_body(body.base)}, {_print_body(body.overlay)},"
            f" {_print_dur(body.offset)})"
        )
    if isinstance(body, HoldTemplate):
        return f"hold({_print_dur(body.dur)})"
    return body.name


def _print_dur(expr: DurExpr) -> str:
    from .model import format_decimal

    if isinstance(expr, DurLit):
        return format_decimal(expr.value)
    if isinstance(expr, DurOf):
        return f"dur({expr.param})"
    if isinstance(expr, DurParam):
        return expr.param
    return f"{_print_dur(expr.left)} {expr.op} {_print_dur(expr.right)}"


# --- type checking -----------------------------------------------------------

class TypeCheckError(Exception):
    def __init__(self, path: Path, message: str):
        super().__init__(f"{message} (at {format_path(path) or '<root>'})")
        self.path = path


class UnknownRule(TypeCheckError):
    def __init__(self, path: Path, name: str):
        super().__init__(path, f"unknown rule {name!r}")
        self.name = name


class ArityMismatch(TypeCheckError):
    def __init__(self, path: Path, name: str, expected: str, got: int):
        super().__init__(path, f"{name!r} expects {expected} arguments, got {got}")
        self.expected = expected
        self.got = got


class TypeMismatch(TypeCheckError):
    def __init__(self, path: Path, expected: str, found: str):
        super().__init__(path, f"expected {expected}, found {found}")
        self.expected = expected
        self.found = found


def type_check(reg: Registry, expr: Expression) -> ParamType:
    """Result type of `expr` against the registry; rule applications yield
    score, natives their own type.  Raises UnknownRule / ArityMismatch /
    TypeMismatch carrying the offending path."""
    return _check(reg, expr, ())


def _check(reg: Registry, expr: Expression, path: Path) -> ParamType:
    if isinstance(expr, Num):
        return ParamType.NUMBER
    if isinstance(expr, Side):
        return ParamType.SIDE
    if isinstance(expr, Point):
        if expr.name not in reg.points:
            raise TypeMismatch(path, "a declared point", f"unknown point @{expr.name}")
        return ParamType.POINT
    rdef = reg.rules.get(expr.name)
    if rdef is None:
        raise UnknownRule(path, expr.name)
    child_types = [
        _check(reg, child, path + (i,)) for i, child in enumerate(expr.children)
    ]
    fixed = len(rdef.params)
    got = len(expr.children)
    if rdef.variadic is None:
        if got != fixed:
            raise ArityMismatch(path, expr.name, str(fixed), got)
    elif got < rdef.min_arity():
        raise ArityMismatch(path, expr.name, f"at least {rdef.min_arity()}", got)
    for i, child_type in enumerate(child_types):
        expected = rdef.params[i].type if i < fixed else rdef.variadic.type
        if child_type != expected:
            raise TypeMismatch(path + (i,), expected.value, child_type.value)
    return ParamType.SCORE
