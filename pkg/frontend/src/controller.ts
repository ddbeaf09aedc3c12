// Async editor actions: each one talks to the service, then folds the
// response into the state.  The DOM layer only dispatches these and
// redraws.

import { ApiError, Client, type DocumentJson } from "./api.js";
import type { Scene } from "./scene.js";
import { hitTest } from "./scene.js";
import {
  EditorState,
  placeholderFor,
  revalidateSelection,
  select,
  withConflict,
  withDocument,
  withError,
  withMatches,
} from "./state.js";

export interface Session {
  client: Client;
  state: EditorState;
  scenes: Map<number, Scene>;
  svgs: Map<number, string>; // raw bytes from render?format=svg, shown as-is
}

export function newSession(client: Client): Session {
  return {
    client,
    state: {
      doc: null,
      selected: null,
      palette: [],
      points: [],
      matches: [],
      matchIndex: -1,
      error: null,
      conflict: false,
    },
    scenes: new Map(),
    svgs: new Map(),
  };
}

export async function loadPalette(session: Session): Promise<void> {
  session.state.palette = await session.client.rules();
  session.state.points = await session.client.points();
}

async function refreshRenderings(session: Session, doc: DocumentJson): Promise<void> {
  session.scenes.clear();
  session.svgs.clear();
  for (let piece = 0; piece < doc.pieces.length; piece++) {
    session.scenes.set(piece, await session.client.renderScene(doc.id, piece));
    session.svgs.set(piece, await session.client.renderSvg(doc.id, piece));
  }
}

export async function openDocument(session: Session, id: string): Promise<void> {
  const doc = await session.client.getDocument(id);
  await refreshRenderings(session, doc);
  session.state = revalidateSelection(withDocument(session.state, doc), session.scenes);
}

export async function createDocument(session: Session, pieces: string[]): Promise<void> {
  const doc = await session.client.createDocument(pieces);
  await refreshRenderings(session, doc);
  session.state = withDocument(session.state, doc);
}

/** Click at (xEm, yEm) inside a piece's rendering. */
export function clickPiece(session: Session, piece: number, xEm: number, yEm: number): void {
  const scene = session.scenes.get(piece);
  if (!scene) return;
  const path = hitTest(scene, xEm, yEm);
  session.state = select(session.state, path === null ? null : { piece, path });
}

type PatchCall = (doc: DocumentJson, piece: number, path: string) => Promise<DocumentJson>;

async function patchSelected(session: Session, call: PatchCall): Promise<void> {
  const { doc, selected } = session.state;
  if (!doc || !selected) {
    session.state = withError(session.state, "select a node first");
    return;
  }
  try {
    const updated = await call(doc, selected.piece, selected.path);
    await refreshRenderings(session, updated);
    // keep the selection on the edited path
    session.state = revalidateSelection(withDocument(session.state, updated), session.scenes);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      session.state = withConflict(session.state);
    } else if (err instanceof ApiError) {
      session.state = withError(session.state, err.message);
    } else {
      throw err;
    }
  }
}

export function applyReplace(session: Session, text: string): Promise<void> {
  return patchSelected(session, (doc, piece, path) =>
    session.client.patchReplace(doc.id, piece, path, doc.revision, text),
  );
}

export function applyWrap(session: Session, rule: string, slot = 0): Promise<void> {
  return patchSelected(session, (doc, piece, path) =>
    session.client.patchWrap(doc.id, piece, path, doc.revision, rule, slot),
  );
}

export async function applyDelete(session: Session): Promise<void> {
  const replacement = placeholderFor(session.state);
  if (replacement === null) {
    session.state = withError(session.state, "nothing deletable is selected");
    return;
  }
  await applyReplace(session, replacement);
}

export async function undoLast(session: Session): Promise<void> {
  const doc = session.state.doc;
  if (!doc) return;
  try {
    const updated = await session.client.undo(doc.id, doc.revision);
    await refreshRenderings(session, updated);
    session.state = revalidateSelection(withDocument(session.state, updated), session.scenes);
  } catch (err) {
    if (err instanceof ApiError) {
      session.state =
        err.status === 409 ? withConflict(session.state) : withError(session.state, err.message);
    } else {
      throw err;
    }
  }
}

export async function runSearch(session: Session, pattern: string): Promise<void> {
  const doc = session.state.doc;
  if (!doc) return;
  try {
    session.state = withMatches(session.state, await session.client.query(doc.id, pattern));
  } catch (err) {
    if (err instanceof ApiError) {
      session.state = withError(session.state, `bad pattern: ${err.message}`);
    } else {
      throw err;
    }
  }
}

/** The invariant behind the canonical-text panel: what the UI holds is
 * exactly what the server returns. */
export function canonicalPanelText(session: Session): string {
  return session.state.doc ? session.state.doc.pieces.join("\n") : "";
}
