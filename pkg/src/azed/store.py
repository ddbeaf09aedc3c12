"""On-disk document store with revisions and per-document write locking.

Each document is one `<id>.azee` file (one canonical expression per line)
plus an `<id>.meta.json` sidecar holding the id and revision counter.
Writes go through a temp file and `os.replace`, so a completed write
survives a crash and a restarted store reproduces the exact state.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path as FsPath

from . import docs
from .model import Expression, parse_path
from .parser import ParseError, parse, print_canonical
from .registry import Registry, TypeCheckError, type_check


@dataclass(frozen=True)
class LineError:
    line: int  # 1-based
    offset: int | None
    message: str

    def as_json(self) -> dict:
        return {"line": self.line, "offset": self.offset, "message": self.message}


class InvalidDocument(Exception):
    def __init__(self, errors: list[LineError]):
        super().__init__("; ".join(f"line {e.line}: {e.message}" for e in errors))
        self.errors = errors


class RevisionConflict(Exception):
    def __init__(self, current: int, given: int):
        super().__init__(f"revision {given} is stale, current is {current}")
        self.current = current
        self.given = given


class UnknownDocument(KeyError):
    pass


def parse_pieces(lines: list[str]) -> list[Expression]:
    """Parse and collect errors for every line before giving up."""
    pieces = []
    errors = []
    for number, text in enumerate(lines, start=1):
        try:
            pieces.append(parse(text))
        except ParseError as err:
            errors.append(LineError(number, err.offset, str(err)))
    if errors:
        raise InvalidDocument(errors)
    return pieces


@dataclass
class StoredDocument:
    document: docs.Document
    revision: int

    def lines(self) -> list[str]:
        return [print_canonical(p) for p in self.document.pieces]


class DocumentStore:
    def __init__(self, root: FsPath | str, registry: Registry):
        self.root = FsPath(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.registry = registry
        self._cache: dict[str, StoredDocument] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._global = threading.Lock()

    def _lock(self, doc_id: str) -> threading.Lock:
        with self._global:
            return self._locks.setdefault(doc_id, threading.Lock())

    def _doc_path(self, doc_id: str) -> FsPath:
        return self.root / f"{doc_id}.azee"

    def _meta_path(self, doc_id: str) -> FsPath:
        return self.root / f"{doc_id}.meta.json"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.azee"))

    def create(self, lines: list[str]) -> StoredDocument:
        pieces = parse_pieces(lines)
        errors = []
        for number, piece in enumerate(pieces, start=1):
            try:
                type_check(self.registry, piece)
            except TypeCheckError as err:
                errors.append(LineError(number, None, str(err)))
        if errors:
            raise InvalidDocument(errors)
        doc_id = uuid.uuid4().hex[:12]
        stored = StoredDocument(docs.Document(doc_id, tuple(pieces)), 1)
        with self._lock(doc_id):
            self._persist(stored)
            self._cache[doc_id] = stored
        return stored

    def get(self, doc_id: str) -> StoredDocument:
        with self._lock(doc_id):
            return self._load(doc_id)

    def _load(self, doc_id: str) -> StoredDocument:
        cached = self._cache.get(doc_id)
        if cached is not None:
            return cached
        doc_path = self._doc_path(doc_id)
        meta_path = self._meta_path(doc_id)
        if not doc_path.exists() or not meta_path.exists():
            raise UnknownDocument(doc_id)
        text = doc_path.read_text(encoding="utf-8")
        pieces = tuple(parse(line) for line in text.splitlines())
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        stored = StoredDocument(docs.Document(doc_id, pieces), int(meta["revision"]))
        self._cache[doc_id] = stored
        return stored

    def _persist(self, stored: StoredDocument):
        body = "".join(line + "\n" for line in stored.lines())
        self._write_atomic(self._doc_path(stored.document.id), body)
        meta = json.dumps({"id": stored.document.id, "revision": stored.revision})
        self._write_atomic(self._meta_path(stored.document.id), meta + "\n")

    def _write_atomic(self, path: FsPath, content: str):
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(content, encoding="utf-8")
        os.replace(tmp, path)

    def _mutate(self, doc_id: str, revision: int, change) -> StoredDocument:
        with self._lock(doc_id):
            stored = self._load(doc_id)
            if stored.revision != revision:
                raise RevisionConflict(stored.revision, revision)
            new_doc = change(stored.document)
            updated = StoredDocument(new_doc, stored.revision + 1)
            self._persist(updated)
            self._cache[doc_id] = updated
            return updated

    def replace_node(self, doc_id: str, revision: int, piece: int, path_str: str, text: str) -> StoredDocument:
        path = parse_path(path_str)
        expr = parse(text)
        return self._mutate(
            doc_id, revision,
            lambda d: docs.edit_replace(d, self.registry, piece, path, expr),
        )

    def wrap_node(self, doc_id: str, revision: int, piece: int, path_str: str, rule: str, slot: int) -> StoredDocument:
        path = parse_path(path_str)
        return self._mutate(
            doc_id, revision,
            lambda d: docs.edit_wrap(d, self.registry, piece, path, rule, slot),
        )

    def undo(self, doc_id: str, revision: int) -> StoredDocument:
        return self._mutate(doc_id, revision, docs.undo)
