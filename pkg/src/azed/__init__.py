"""azed: an editable, queryable, synthesisable toolkit for the AZee sign
language expression notation."""

from .defaults import DEFAULT_REGISTRY_TEXT, SAMPLE_STORY_TEXT, default_registry
from .model import (
    Expression,
    InvalidPath,
    Num,
    Path,
    Point,
    Rule,
    Side,
    Var,
    Wildcard,
    equal,
    node_at,
    replace_at,
    size,
)
from .parser import ParseError, parse, parse_pattern, print_canonical
from .registry import (
    ArityMismatch,
    Registry,
    RegistryError,
    TypeCheckError,
    TypeMismatch,
    UnknownRule,
    load_registry,
    type_check,
)
from .score import (
    SigningScore,
    Track,
    TrackCollision,
    evaluate,
    export_score,
    score_block,
    score_seq,
    score_sync,
)

__version__ = "0.1.0"
