"""Signing scores: multi-articulator timelines and the algebra that builds
them.

A score holds non-overlapping timed form blocks on a fixed set of eight
articulator tracks.  Rule bodies are small combinator templates (block /
seq / sync / hold / parameter reference) evaluated bottom-up against an
expression tree.  All times are exact decimals, so results are
bit-reproducible.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import TYPE_CHECKING, Iterable, Mapping, Union

from .model import Expression, Num, Path, Point, Rule, Side, format_decimal, format_path

if TYPE_CHECKING:
    from .registry import Registry


class Track(enum.Enum):
    RHAND = "rhand"
    LHAND = "lhand"
    MOUTH = "mouth"
    EYES = "eyes"
    BROWS = "brows"
    GAZE = "gaze"
    HEAD = "head"
    TORSO = "torso"


TRACKS = tuple(Track)
ZERO = Decimal(0)


class NonPositiveDuration(Exception):
    def __init__(self, value: Decimal):
        super().__init__(f"duration must be positive, got {format_decimal(value)}")
        self.value = value


class TrackCollision(Exception):
    """Two blocks would overlap on one track.  `path` is filled in by the
    evaluator with the rule application whose body caused the overlap."""

    def __init__(self, track: Track, time: Decimal, path: Path | None = None):
        super().__init__(
            f"track collision on {track.value} at {format_decimal(time)}"
        )
        self.track = track
        self.time = time
        self.path = path


class EvaluationError(Exception):
    def __init__(self, message: str, path: Path = ()):
        super().__init__(f"{message} (at {format_path(path) or '<root>'})")
        self.path = path


@dataclass(frozen=True)
class TimedBlock:
    start: Decimal
    end: Decimal
    label: str

    def __post_init__(self):
        if self.end <= self.start:
            raise ValueError("block end must be after start")


@dataclass(frozen=True)
class SigningScore:
    """Per-track sorted, non-overlapping blocks plus a total duration.
    Tracks without blocks are omitted from the mapping."""

    duration: Decimal
    blocks: Mapping[Track, tuple[TimedBlock, ...]]

    def __post_init__(self):
        clean = {}
        for track, blocks in self.blocks.items():
            if not blocks:
                continue
            blocks = tuple(sorted(blocks, key=lambda b: b.start))
            for a, b in zip(blocks, blocks[1:]):
                if b.start < a.end:
                    raise TrackCollision(track, b.start)
            if blocks[0].start < ZERO or blocks[-1].end > self.duration:
                raise ValueError("block outside [0, duration]")
            clean[track] = blocks
        object.__setattr__(self, "blocks", clean)

    def all_blocks(self) -> Iterable[tuple[Track, TimedBlock]]:
        for track in TRACKS:
            for block in self.blocks.get(track, ()):
                yield track, block


EMPTY_SCORE = SigningScore(ZERO, {})


def score_block(tracks: Iterable[Track], label: str, dur: Decimal) -> SigningScore:
    """One block [0, dur] with `label` on each listed track."""
    tracks = tuple(tracks)
    if not tracks:
        raise ValueError("block needs at least one track")
    if dur <= ZERO:
        raise NonPositiveDuration(dur)
    block = TimedBlock(ZERO, dur, label)
    return SigningScore(dur, {t: (block,) for t in tracks})


def score_hold(dur: Decimal) -> SigningScore:
    """Silent time: a score with duration but no blocks."""
    if dur <= ZERO:
        raise NonPositiveDuration(dur)
    return SigningScore(dur, {})


def _shifted(blocks: Mapping[Track, tuple[TimedBlock, ...]], dt: Decimal):
    if dt == ZERO:
        return {t: bs for t, bs in blocks.items()}
    return {
        t: tuple(TimedBlock(b.start + dt, b.end + dt, b.label) for b in bs)
        for t, bs in blocks.items()
    }


def score_seq(a: SigningScore, b: SigningScore) -> SigningScore:
    """`b` follows `a`: b's blocks shift by a's duration."""
    merged = _shifted(a.blocks, ZERO)
    for track, blocks in _shifted(b.blocks, a.duration).items():
        merged[track] = merged.get(track, ()) + blocks
    return SigningScore(a.duration + b.duration, merged)


def score_seq_all(scores: Iterable[SigningScore]) -> SigningScore:
    out = EMPTY_SCORE
    for s in scores:
        out = score_seq(out, s)
    return out


def score_sync(base: SigningScore, overlay: SigningScore, offset: Decimal) -> SigningScore:
    """Overlay shifted by `offset` relative to base's origin; the union is
    renormalized so the earliest block starts at 0 and the duration is the
    span of the blocks.  Raises TrackCollision on same-track overlap."""
    merged: dict[Track, list[TimedBlock]] = {
        t: list(bs) for t, bs in base.blocks.items()
    }
    for track, blocks in _shifted(overlay.blocks, offset).items():
        merged.setdefault(track, []).extend(blocks)

    starts = []
    ends = []
    for track, blocks in merged.items():
        blocks.sort(key=lambda b: b.start)
        for x, y in zip(blocks, blocks[1:]):
            if y.start < x.end:
                raise TrackCollision(track, y.start)
        if blocks:
            starts.append(blocks[0].start)
            ends.append(blocks[-1].end)
    if not starts:
        return EMPTY_SCORE
    origin = min(starts)
    span = max(ends) - origin
    return SigningScore(span, _shifted({t: tuple(bs) for t, bs in merged.items()}, -origin))


# --- rule-body templates ----------------------------------------------------
#
# The registry compiles each rule body into this small combinator IR; the
# evaluator below interprets it with the rule's arguments bound.

@dataclass(frozen=True)
class BlockTemplate:
    tracks: frozenset[Track]
    label: str  # may contain {param} splices for point/side arguments
    dur: "DurExpr"


@dataclass(frozen=True)
class SeqTemplate:
    items: tuple["ScoreTemplate", ...]


@dataclass(frozen=True)
class SyncTemplate:
    base: "ScoreTemplate"
    overlay: "ScoreTemplate"
    offset: "DurExpr"


@dataclass(frozen=True)
class HoldTemplate:
    dur: "DurExpr"


@dataclass(frozen=True)
class ParamRef:
    name: str


ScoreTemplate = Union[BlockTemplate, SeqTemplate, SyncTemplate, HoldTemplate, ParamRef]


@dataclass(frozen=True)
class DurLit:
    value: Decimal


@dataclass(frozen=True)
class DurOf:
    """dur(p): the duration of a score parameter."""

    param: str


@dataclass(frozen=True)
class DurParam:
    """A numeric parameter used directly in a duration expression."""

    param: str


@dataclass(frozen=True)
class DurBin:
    op: str  # "+" or "-"
    left: "DurExpr"
    right: "DurExpr"


DurExpr = Union[DurLit, DurOf, DurParam, DurBin]

_SPLICE = re.compile(r"\{([a-z][a-z0-9-]*)\}")

# Values a rule parameter can be bound to during evaluation.
Binding = Union[SigningScore, Decimal, str, list]


def eval_duration(expr: DurExpr, env: Mapping[str, Binding]) -> Decimal:
    if isinstance(expr, DurLit):
        return expr.value
    if isinstance(expr, DurOf):
        score = env[expr.param]
        if not isinstance(score, SigningScore):
            raise EvaluationError(f"dur() needs a score parameter, got {expr.param!r}")
        return score.duration
    if isinstance(expr, DurParam):
        value = env[expr.param]
        if not isinstance(value, Decimal):
            raise EvaluationError(f"parameter {expr.param!r} is not a number")
        return value
    if expr.op == "+":
        return eval_duration(expr.left, env) + eval_duration(expr.right, env)
    return eval_duration(expr.left, env) - eval_duration(expr.right, env)


def splice_label(template: str, env: Mapping[str, Binding]) -> str:
    def sub(m: re.Match) -> str:
        value = env.get(m.group(1))
        if not isinstance(value, str):
            raise EvaluationError(f"label splice {{{m.group(1)}}} is not a point or side")
        return value

    return _SPLICE.sub(sub, template)


def evaluate(reg: "Registry", expr: Expression) -> SigningScore:
    """Bottom-up evaluation of a type-checked, score-valued expression.

    Collisions propagate as TrackCollision tagged with the path of the
    innermost rule application whose body produced the overlap.
    """
    return _eval_expr(reg, expr, ())


def _eval_expr(reg: "Registry", expr: Expression, path: Path) -> SigningScore:
    if not isinstance(expr, Rule):
        raise EvaluationError("native value where a score is required", path)
    rdef = reg.rules.get(expr.name)
    if rdef is None:
        raise EvaluationError(f"unknown rule {expr.name!r}", path)

    env: dict[str, Binding] = {}
    fixed = len(rdef.params)
    if len(expr.children) < fixed or (
        rdef.variadic is None and len(expr.children) != fixed
    ):
        raise EvaluationError(f"arity mismatch for {expr.name!r}", path)
    for i, param in enumerate(rdef.params):
        env[param.name] = _bind(reg, param.type.value, expr.children[i], path + (i,))
    if rdef.variadic is not None:
        env[rdef.variadic.name] = [
            _bind(reg, rdef.variadic.type.value, child, path + (i,))
            for i, child in enumerate(expr.children[fixed:], start=fixed)
        ]

    try:
        return _eval_template(reg, rdef.body, env, path)
    except TrackCollision as tc:
        if tc.path is None:
            tc.path = path
        raise


def _bind(reg, type_name: str, child: Expression, path: Path) -> Binding:
    if type_name == "score":
        return _eval_expr(reg, child, path)
    if type_name == "point":
        if not isinstance(child, Point):
            raise EvaluationError("expected a point argument", path)
        return child.name
    if type_name == "side":
        if not isinstance(child, Side):
            raise EvaluationError("expected a side argument", path)
        return child.side
    if type_name == "number":
        if not isinstance(child, Num):
            raise EvaluationError("expected a number argument", path)
        return child.value
    raise EvaluationError(f"unknown parameter type {type_name!r}", path)


def _eval_template(reg, template: ScoreTemplate, env, path: Path) -> SigningScore:
    if isinstance(template, BlockTemplate):
        dur = eval_duration(template.dur, env)
        if dur <= ZERO:
            raise NonPositiveDuration(dur)
        return score_block(template.tracks, splice_label(template.label, env), dur)
    if isinstance(template, SeqTemplate):
        parts: list[SigningScore] = []
        for item in template.items:
            if isinstance(item, ParamRef) and isinstance(env.get(item.name), list):
                parts.extend(env[item.name])
            else:
                parts.append(_eval_template(reg, item, env, path))
        return score_seq_all(parts)
    if isinstance(template, SyncTemplate):
        base = _eval_template(reg, template.base, env, path)
        overlay = _eval_template(reg, template.overlay, env, path)
        return score_sync(base, overlay, eval_duration(template.offset, env))
    if isinstance(template, HoldTemplate):
        return score_hold(eval_duration(template.dur, env))
    if isinstance(template, ParamRef):
        value = env.get(template.name)
        if not isinstance(value, SigningScore):
            raise EvaluationError(f"parameter {template.name!r} is not a score", path)
        return value
    raise EvaluationError(f"bad template node {template!r}", path)


def export_score(score: SigningScore) -> str:
    """Line format: `duration <d>` then one `<track> <start> <end> <label>`
    per block, tracks in enumeration order.  Decimals in shortest exact
    form, so output is bit-exact."""
    lines = [f"duration {format_decimal(score.duration)}"]
    for track, block in score.all_blocks():
        lines.append(
            f"{track.value} {format_decimal(block.start)}"
            f" {format_decimal(block.end)} {block.label}"
        )
    return "\n".join(lines) + "\n"
