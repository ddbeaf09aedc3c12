// Editor state and its pure transitions.  Server responses are the only
// way document content enters the state, so the canonical-text panel can
// never drift from what `GET /documents/{id}` returns.

import type { DocumentJson, MatchJson, RuleInfo } from "./api.js";
import { nodeKind, subtreeText } from "./expr.js";
import type { Scene } from "./scene.js";
import { sceneHasPath } from "./scene.js";

export interface Selection {
  piece: number;
  path: string;
}

export interface EditorState {
  doc: DocumentJson | null;
  selected: Selection | null;
  palette: RuleInfo[];
  points: string[];
  matches: MatchJson[];
  matchIndex: number;
  error: string | null;
  conflict: boolean;
}

export function initialState(): EditorState {
  return {
    doc: null,
    selected: null,
    palette: [],
    points: [],
    matches: [],
    matchIndex: -1,
    error: null,
    conflict: false,
  };
}

export function withDocument(state: EditorState, doc: DocumentJson): EditorState {
  return { ...state, doc, error: null, conflict: false };
}

/** Re-validate the selection against freshly rendered scenes: a path that
 * no longer exists in its piece is dropped. */
export function revalidateSelection(
  state: EditorState,
  scenes: ReadonlyMap<number, Scene>,
): EditorState {
  if (!state.selected) return state;
  const scene = scenes.get(state.selected.piece);
  if (scene && sceneHasPath(scene, state.selected.path)) return state;
  return { ...state, selected: null };
}

export function select(state: EditorState, selected: Selection | null): EditorState {
  return { ...state, selected, error: null };
}

export function withError(state: EditorState, error: string): EditorState {
  return { ...state, error };
}

export function withConflict(state: EditorState): EditorState {
  return { ...state, conflict: true, error: "document changed elsewhere; reload" };
}

export function withMatches(state: EditorState, matches: MatchJson[]): EditorState {
  const next = { ...state, matches, matchIndex: matches.length ? 0 : -1, error: null };
  return matches.length ? selectCurrentMatch(next) : next;
}

export function cycleMatch(state: EditorState, step: 1 | -1): EditorState {
  if (!state.matches.length) return state;
  const count = state.matches.length;
  const matchIndex = (state.matchIndex + step + count) % count;
  return selectCurrentMatch({ ...state, matchIndex });
}

function selectCurrentMatch(state: EditorState): EditorState {
  const current = state.matches[state.matchIndex];
  if (!current) return state;
  return { ...state, selected: { piece: current.piece, path: current.path } };
}

/** Canonical text of the selected subtree, straight from the document
 * panel text. */
export function selectedText(state: EditorState): string | null {
  if (!state.doc || !state.selected) return null;
  const piece = state.doc.pieces[state.selected.piece];
  if (piece === undefined) return null;
  try {
    return subtreeText(piece, state.selected.path);
  } catch {
    return null;
  }
}

/** Replacement used by delete-to-placeholder: the simplest expression of
 * the selected node's type.  The registry declares no placeholder
 * defaults, so the editor falls back to palette values. */
export function placeholderFor(state: EditorState): string | null {
  const text = selectedText(state);
  if (text === null) return null;
  switch (nodeKind(text)) {
    case "number":
      return "0";
    case "side":
      return "#left";
    case "point":
      return state.points.length ? `@${state.points[0]}` : null;
    case "rule": {
      const atom = state.palette.find((r) => r.params.length === 0 && r.variadic === null);
      return atom ? `${atom.name}()` : null;
    }
  }
}

/** Rules the palette offers for wrapping: exactly one required slot. */
export function wrappableRules(palette: RuleInfo[]): RuleInfo[] {
  return palette.filter(
    (r) =>
      r.params.length + (r.variadic ? r.variadic.min : 0) === 1 &&
      (r.params.length === 1 || r.variadic !== null),
  );
}
