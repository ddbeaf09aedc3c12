// End-to-end editor flows against the real document service.  The suite
// spawns `python -m azed serve` on a scratch store and exercises the
// controller exactly as the DOM layer would.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import {
  applyWrap,
  canonicalPanelText,
  clickPiece,
  createDocument,
  loadPalette,
  newSession,
  runSearch,
  undoLast,
  type Session,
} from "../src/controller.js";
import { bbox, sourceBBox, type GlyphRunEl } from "../src/scene.js";
import { cycleMatch } from "../src/state.js";

const E1 = "info-about(dog(), non-subjectivity(nice-kind()))";
const DOG = "\u{1F415}";
const TICK = "✓";

let server: ChildProcess;
let base: string;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

async function waitForServer(url: string): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(url + "/rules");
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const port = await freePort();
  const store = mkdtempSync(join(tmpdir(), "azed-ui-"));
  base = `http://127.0.0.1:${port}`;
  server = spawn(
    "python3",
    ["-m", "azed", "serve", "--store", store, "--listen", `127.0.0.1:${port}`],
    { stdio: "ignore" },
  );
  await waitForServer(base);
});

afterAll(() => {
  server.kill("SIGKILL");
});

async function freshSession(pieces: string[]): Promise<Session> {
  const session = newSession(new Client(base));
  await loadPalette(session);
  await createDocument(session, pieces);
  return session;
}

function glyphRun(session: Session, piece: number, text: string): GlyphRunEl {
  const scene = session.scenes.get(piece);
  if (!scene) throw new Error(`no scene for piece ${piece}`);
  const run = scene.elements.find(
    (el): el is GlyphRunEl => el.kind === "glyphrun" && el.text === text,
  );
  if (!run) throw new Error(`no glyph run ${text}`);
  return run;
}

async function expectPanelMatchesServer(session: Session): Promise<void> {
  const doc = session.state.doc;
  expect(doc).not.toBeNull();
  const fetched = await session.client.getDocument(doc!.id);
  expect(canonicalPanelText(session)).toBe(fetched.pieces.join("\n"));
  expect(doc!.revision).toBe(fetched.revision);
}

describe("editor against the live service", () => {
  it("clicking inside the dog glyph selects path 0", async () => {
    const session = await freshSession([E1]);
    const dog = glyphRun(session, 0, DOG);
    const [x0, y0, x1, y1] = bbox(dog);
    clickPiece(session, 0, (x0 + x1) / 2, (y0 + y1) / 2);
    expect(session.state.selected).toEqual({ piece: 0, path: "0" });
    await expectPanelMatchesServer(session);
  });

  it("clicking the margin clears the selection", async () => {
    const session = await freshSession([E1]);
    clickPiece(session, 0, -0.5, -0.5);
    expect(session.state.selected).toBeNull();
  });

  it("wrapping the selection draws a tick over the dog glyph", async () => {
    const session = await freshSession([E1]);
    const dogBefore = glyphRun(session, 0, DOG);
    const [x0, y0, x1, y1] = bbox(dogBefore);
    clickPiece(session, 0, (x0 + x1) / 2, (y0 + y1) / 2);

    await applyWrap(session, "non-subjectivity");
    expect(session.state.error).toBeNull();
    expect(session.state.doc?.pieces[0]).toBe(
      "info-about(non-subjectivity(dog()), non-subjectivity(nice-kind()))",
    );
    // selection stays on the edited path, now the wrapping node
    expect(session.state.selected).toEqual({ piece: 0, path: "0" });

    // refreshed render shows a tick whose box sits above the dog glyph
    const scene = session.scenes.get(0)!;
    const dog = glyphRun(session, 0, DOG);
    const ticks = scene.elements.filter(
      (el): el is GlyphRunEl => el.kind === "glyphrun" && el.text === TICK,
    );
    const over = ticks.find((tick) => {
      const [tx0, , tx1, ty1] = bbox(tick);
      const [dx0, dy0, dx1] = bbox(dog);
      return ty1 <= dy0 && tx0 < dx1 && dx0 < tx1;
    });
    expect(over, "expected a tick above the dog glyph").toBeDefined();

    // the SVG shown is the server's rendering, byte for byte
    const doc = session.state.doc!;
    expect(session.svgs.get(0)).toBe(await session.client.renderSvg(doc.id, 0));
    await expectPanelMatchesServer(session);
  });

  it("ill-typed replacements surface inline and change nothing", async () => {
    const session = await freshSession([E1]);
    clickPiece(session, 0, 0.5, 0.8); // dog glyph area
    const before = canonicalPanelText(session);
    const { applyReplace } = await import("../src/controller.js");
    await applyReplace(session, "@Lssp");
    expect(session.state.error).toContain("expected score");
    expect(canonicalPanelText(session)).toBe(before);
    await expectPanelMatchesServer(session);
  });

  it("stale revisions trigger the conflict banner", async () => {
    const session = await freshSession([E1]);
    const doc = session.state.doc!;
    // concurrent editor bumps the revision behind our back
    await session.client.patchReplace(doc.id, 0, "0", doc.revision, "nice-kind()");
    clickPiece(session, 0, 0.5, 0.8);
    await applyWrap(session, "non-subjectivity");
    expect(session.state.conflict).toBe(true);
  });

  it("search highlights matches and next/prev cycle the selection", async () => {
    const session = await freshSession([E1, "each-of(dog(), dog())"]);
    await runSearch(session, "dog()");
    expect(session.state.matches.map((m) => [m.piece, m.path])).toEqual([
      [0, "0"],
      [1, "0"],
      [1, "1"],
    ]);
    expect(session.state.selected).toEqual({ piece: 0, path: "0" });
    // every match has a drawable highlight box in its piece's scene
    for (const match of session.state.matches) {
      expect(sourceBBox(session.scenes.get(match.piece)!, match.path)).not.toBeNull();
    }
    session.state = cycleMatch(session.state, 1);
    expect(session.state.selected).toEqual({ piece: 1, path: "0" });
    session.state = cycleMatch(session.state, -1);
    expect(session.state.selected).toEqual({ piece: 0, path: "0" });

    await runSearch(session, "(");
    expect(session.state.error).toContain("bad pattern");
  });

  it("undo restores the previous revision's text", async () => {
    const session = await freshSession([E1]);
    clickPiece(session, 0, 0.5, 0.8);
    await applyWrap(session, "non-subjectivity");
    const wrapped = session.state.doc!.pieces[0];
    await undoLast(session);
    expect(session.state.doc!.pieces[0]).toBe(E1);
    expect(session.state.doc!.pieces[0]).not.toBe(wrapped);
    await expectPanelMatchesServer(session);
  });

  it("delete replaces the selected subtree with a placeholder", async () => {
    const session = await freshSession([E1]);
    // select the non-subjectivity node via its tick mark
    const tick = glyphRun(session, 0, TICK);
    const [x0, y0, x1, y1] = bbox(tick);
    clickPiece(session, 0, (x0 + x1) / 2, (y0 + y1) / 2);
    expect(session.state.selected).toEqual({ piece: 0, path: "1" });
    const { applyDelete } = await import("../src/controller.js");
    await applyDelete(session);
    expect(session.state.doc!.pieces[0]).toBe("info-about(dog(), dog())");
    await expectPanelMatchesServer(session);
  });
});
