"""Command-line front door.

Subcommands: check, render, score, query, registry-check, serve.
Standard output carries data only; diagnostics go to standard error.
Exit codes: 0 success, 1 input error (parse/type), 2 evaluation error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

from .defaults import DEFAULT_REGISTRY_TEXT, default_registry
from .docs import Document, compile_pattern, query
from .layout import layout, to_svg
from .model import format_path
from .parser import ParseError, parse, parse_spans
from .registry import Registry, RegistryError, TypeCheckError, load_registry, type_check
from .score import EvaluationError, TrackCollision, evaluate, export_score

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_EVAL = 2
EXIT_IO = 3


def _read_file(path: str) -> str:
    try:
        return FsPath(path).read_text(encoding="utf-8")
    except OSError as err:
        raise _IOFailure(f"{path}: {err.strerror or err}") from err


class _IOFailure(Exception):
    pass


def _load_registry(args) -> Registry:
    if args.registry is None:
        return default_registry()
    text = _read_file(args.registry)
    return load_registry(text)


def _check_lines(registry: Registry, path: str, text: str):
    """Yield (line_number, offset, message) for every diagnostic."""
    for number, line in enumerate(text.splitlines(), start=1):
        try:
            expr, spans = parse_spans(line)
        except ParseError as err:
            yield number, err.offset, str(err)
            continue
        try:
            type_check(registry, expr)
        except TypeCheckError as err:
            start, _end = spans.get(err.path, (0, 0))
            yield number, start, str(err)


def _parse_document(registry: Registry, path: str) -> Document:
    text = _read_file(path)
    pieces = []
    for number, line in enumerate(text.splitlines(), start=1):
        try:
            expr = parse(line)
            type_check(registry, expr)
        except (ParseError, TypeCheckError) as err:
            raise _InputFailure(f"{path}:{number}: {err}") from err
        pieces.append(expr)
    return Document(path, tuple(pieces))


class _InputFailure(Exception):
    pass


def cmd_check(args) -> int:
    registry = _load_registry(args)
    failed = False
    for path in args.files:
        text = _read_file(path)
        for number, offset, message in _check_lines(registry, path, text):
            print(f"{path}:{number}:{offset}: {message}", file=sys.stderr)
            failed = True
    return EXIT_INPUT if failed else EXIT_OK


def cmd_render(args) -> int:
    registry = _load_registry(args)
    doc = _parse_document(registry, args.file)
    if not 0 <= args.piece < len(doc.pieces):
        raise _InputFailure(f"{args.file}: piece {args.piece} out of range")
    svg = to_svg(layout(registry, doc.pieces[args.piece]))
    if args.out is None:
        sys.stdout.write(svg)
    else:
        try:
            FsPath(args.out).write_text(svg, encoding="utf-8")
        except OSError as err:
            raise _IOFailure(f"{args.out}: {err.strerror or err}") from err
    return EXIT_OK


def cmd_score(args) -> int:
    registry = _load_registry(args)
    doc = _parse_document(registry, args.file)
    if not 0 <= args.piece < len(doc.pieces):
        raise _InputFailure(f"{args.file}: piece {args.piece} out of range")
    try:
        score = evaluate(registry, doc.pieces[args.piece])
    except (TrackCollision, EvaluationError) as err:
        at = format_path(getattr(err, "path", None) or ())
        print(f"{args.file}: piece {args.piece}: {err} at node {at or '<root>'}", file=sys.stderr)
        return EXIT_EVAL
    sys.stdout.write(export_score(score))
    return EXIT_OK


def cmd_query(args) -> int:
    registry = _load_registry(args)
    try:
        pattern = compile_pattern(args.pattern)
    except ParseError as err:
        raise _InputFailure(f"bad pattern: {err}") from err
    doc = _parse_document(registry, args.file)
    for m in query(doc, pattern):
        print(f"{m.piece}:{format_path(m.path)}")
    return EXIT_OK


def cmd_registry_check(args) -> int:
    text = _read_file(args.file)
    load_registry(text)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    from .store import DocumentStore

    registry = _load_registry(args)
    store = DocumentStore(args.store, registry)
    ui_dir = args.ui if args.ui and FsPath(args.ui).is_dir() else None
    app = create_app(registry, store, ui_dir)
    host, _, port = args.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="azed", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--registry", help="registry file (default: built-in rule set)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse and type-check document files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("render", parents=[common], help="render one piece as SVG")
    p.add_argument("file")
    p.add_argument("--piece", type=int, default=0)
    p.add_argument("--out", help="output path (default: standard output)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("score", parents=[common], help="print one piece's signing score")
    p.add_argument("file")
    p.add_argument("--piece", type=int, default=0)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("query", parents=[common], help="search a document for a pattern")
    p.add_argument("file")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("registry-check", parents=[common], help="validate a registry file")
    p.add_argument("file")
    p.set_defaults(func=cmd_registry_check)

    p = sub.add_parser("serve", parents=[common], help="run the document service")
    p.add_argument("--store", required=True, help="document store directory")
    p.add_argument("--listen", default="127.0.0.1:8040", help="addr:port to bind")
    p.add_argument("--ui", help="static editor assets to serve under /ui")
    p.set_defaults(func=cmd_serve)

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _IOFailure as err:
        print(str(err), file=sys.stderr)
        return EXIT_IO
    except (_InputFailure, RegistryError) as err:
        print(str(err), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
