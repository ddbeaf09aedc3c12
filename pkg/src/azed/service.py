"""HTTP document service: parse, type-check, render, query, and edit
documents over a persistent store.

Wire formats: documents `{id, revision, pieces:[string]}`; matches
`{piece, path, bindings}`; scenes `{width, height, elements:[...]}`.
Node paths travel as dot-joined indices with the empty string naming the
root.  Edits use optimistic concurrency: a stale revision gets 409.
"""

from __future__ import annotations

from pathlib import Path as FsPath

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import docs
from .layout import layout, scene_to_json, to_svg
from .model import InvalidPath, format_path, parse_path
from .parser import ParseError, print_canonical
from .registry import GlyphSpec, Registry, TypeCheckError
from .score import EvaluationError, TrackCollision, evaluate, export_score
from .store import (
    DocumentStore,
    InvalidDocument,
    RevisionConflict,
    StoredDocument,
    UnknownDocument,
)


class CreateRequest(BaseModel):
    pieces: list[str]


class WrapSpec(BaseModel):
    rule: str
    slot: int


class PatchRequest(BaseModel):
    revision: int
    replace: str | None = None
    wrap: WrapSpec | None = None


class QueryRequest(BaseModel):
    pattern: str


class UndoRequest(BaseModel):
    revision: int


def _document_json(stored: StoredDocument) -> dict:
    return {
        "id": stored.document.id,
        "revision": stored.revision,
        "pieces": stored.lines(),
    }


def _glyph_kind(glyph: GlyphSpec | None) -> str:
    if glyph is None:
        return "nameframe"
    return type(glyph).__name__.removeprefix("Glyph").lower()


def create_app(registry: Registry, store: DocumentStore, ui_dir: FsPath | str | None = None) -> FastAPI:
    app = FastAPI(title="azed document service")

    @app.exception_handler(UnknownDocument)
    async def _unknown(request: Request, exc: UnknownDocument):
        return JSONResponse(status_code=404, content={"detail": "unknown document"})

    @app.exception_handler(RevisionConflict)
    async def _conflict(request: Request, exc: RevisionConflict):
        return JSONResponse(
            status_code=409,
            content={"detail": {"message": str(exc), "current": exc.current}},
        )

    @app.exception_handler(InvalidDocument)
    async def _invalid(request: Request, exc: InvalidDocument):
        return JSONResponse(
            status_code=422,
            content={"detail": [e.as_json() for e in exc.errors]},
        )

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, exc: ParseError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"message": str(exc), "offset": exc.offset}},
        )

    @app.exception_handler(TypeCheckError)
    async def _type_error(request: Request, exc: TypeCheckError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"message": str(exc), "path": format_path(exc.path)}},
        )

    @app.exception_handler(InvalidPath)
    async def _bad_path(request: Request, exc: InvalidPath):
        return JSONResponse(status_code=422, content={"detail": {"message": str(exc)}})

    @app.exception_handler(docs.SlotUnfillable)
    async def _unfillable(request: Request, exc: docs.SlotUnfillable):
        return JSONResponse(status_code=422, content={"detail": {"message": str(exc)}})

    @app.exception_handler(docs.NothingToUndo)
    async def _no_undo(request: Request, exc: docs.NothingToUndo):
        return JSONResponse(status_code=422, content={"detail": {"message": "nothing to undo"}})

    @app.exception_handler(EvaluationError)
    async def _eval_error(request: Request, exc: EvaluationError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"message": str(exc), "path": format_path(exc.path)}},
        )

    @app.exception_handler(TrackCollision)
    async def _collision(request: Request, exc: TrackCollision):
        return JSONResponse(
            status_code=500,
            content={
                "detail": {
                    "message": str(exc),
                    "track": exc.track.value,
                    "path": format_path(exc.path or ()),
                }
            },
        )

    @app.post("/documents", status_code=201)
    def create_document(body: CreateRequest):
        return _document_json(store.create(body.pieces))

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        return _document_json(store.get(doc_id))

    def _piece(doc_id: str, piece: int):
        stored = store.get(doc_id)
        if not 0 <= piece < len(stored.document.pieces):
            raise UnknownDocument(f"{doc_id}/{piece}")
        return stored.document.pieces[piece]

    @app.patch("/documents/{doc_id}/pieces/{piece}/node/{node_path:path}")
    def patch_node(doc_id: str, piece: int, node_path: str, body: PatchRequest):
        _piece(doc_id, piece)
        try:
            parse_path(node_path)
        except ValueError:
            return JSONResponse(
                status_code=422,
                content={"detail": {"message": f"bad node path {node_path!r}"}},
            )
        if (body.replace is None) == (body.wrap is None):
            return JSONResponse(
                status_code=422,
                content={"detail": {"message": "exactly one of replace/wrap required"}},
            )
        if body.replace is not None:
            stored = store.replace_node(doc_id, body.revision, piece, node_path, body.replace)
        else:
            stored = store.wrap_node(
                doc_id, body.revision, piece, node_path, body.wrap.rule, body.wrap.slot
            )
        return _document_json(stored)

    @app.get("/documents/{doc_id}/pieces/{piece}/render")
    def render_piece(doc_id: str, piece: int, format: str = "svg"):
        expr = _piece(doc_id, piece)
        if format == "svg":
            return Response(to_svg(layout(registry, expr)), media_type="image/svg+xml")
        if format == "scene":
            return scene_to_json(layout(registry, expr))
        if format == "score":
            return PlainTextResponse(export_score(evaluate(registry, expr)))
        return JSONResponse(
            status_code=422,
            content={"detail": {"message": f"unknown format {format!r}"}},
        )

    @app.post("/documents/{doc_id}/query")
    def run_query(doc_id: str, body: QueryRequest):
        stored = store.get(doc_id)
        pattern = docs.compile_pattern(body.pattern)
        return [
            {
                "piece": m.piece,
                "path": format_path(m.path),
                "bindings": {k: print_canonical(v) for k, v in m.bindings.items()},
            }
            for m in docs.query(stored.document, pattern)
        ]

    @app.post("/documents/{doc_id}/undo")
    def undo_edit(doc_id: str, body: UndoRequest):
        return _document_json(store.undo(doc_id, body.revision))

    @app.get("/rules")
    def list_rules():
        catalog = []
        for name in sorted(registry.rules):
            rdef = registry.rules[name]
            catalog.append(
                {
                    "name": name,
                    "params": [p.type.value for p in rdef.params],
                    "variadic": (
                        {"type": rdef.variadic.type.value, "min": rdef.variadic_min}
                        if rdef.variadic
                        else None
                    ),
                    "glyph": _glyph_kind(rdef.glyph),
                }
            )
        return catalog

    @app.get("/points")
    def list_points():
        return list(registry.points)

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
