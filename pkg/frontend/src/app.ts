// DOM layer: renders a Session and wires events to controller actions.
// All document mutations go through the controller (and so through PATCH).

import type { MatchJson } from "./api.js";
import {
  Session,
  applyDelete,
  applyReplace,
  applyWrap,
  canonicalPanelText,
  clickPiece,
  createDocument,
  openDocument,
  runSearch,
  undoLast,
} from "./controller.js";
import { cycleMatch, selectedText, wrappableRules } from "./state.js";
import { sourceBBox, type Scene } from "./scene.js";

const PX_PER_EM = 16;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class App {
  private root: HTMLElement;
  private searchBox: HTMLInputElement;

  constructor(
    private session: Session,
    mount: HTMLElement,
  ) {
    this.root = mount;
    this.searchBox = el("input");
    document.addEventListener("keydown", (ev) => this.onKey(ev));
  }

  private onKey(ev: KeyboardEvent): void {
    if (ev.ctrlKey && ev.key === "f") {
      ev.preventDefault();
      this.searchBox.focus();
    } else if (ev.ctrlKey && ev.key === "z") {
      ev.preventDefault();
      void this.run(() => undoLast(this.session));
    }
  }

  private async run(action: () => Promise<void> | void): Promise<void> {
    await action();
    this.draw();
  }

  draw(): void {
    const { state } = this.session;
    this.root.replaceChildren();

    this.root.append(this.toolbar());
    if (state.conflict) {
      this.root.append(el("div", "banner conflict", state.error ?? "revision conflict"));
    } else if (state.error) {
      this.root.append(el("div", "banner error", state.error));
    }

    const main = el("div", "columns");
    main.append(this.palettePanel(), this.piecesPanel(), this.inspectorPanel());
    this.root.append(main);

    const panel = el("pre", "canonical");
    panel.textContent = canonicalPanelText(this.session);
    this.root.append(el("h3", undefined, "Document text"), panel);
  }

  private toolbar(): HTMLElement {
    const bar = el("div", "toolbar");

    const idBox = el("input");
    idBox.placeholder = "document id";
    idBox.value = this.session.state.doc?.id ?? "";
    const open = el("button", undefined, "Open");
    open.onclick = () => void this.run(() => openDocument(this.session, idBox.value.trim()));

    const newBox = el("input");
    newBox.placeholder = "new document: one expression per line";
    newBox.value = "info-about(dog(), non-subjectivity(nice-kind()))";
    const create = el("button", undefined, "Create");
    create.onclick = () =>
      void this.run(() =>
        createDocument(
          this.session,
          newBox.value.split("\n").map((line) => line.trim()).filter(Boolean),
        ),
      );

    this.searchBox.placeholder = "search pattern, e.g. info-about(_, ?x)";
    const go = el("button", undefined, "Search");
    go.onclick = () => void this.run(() => runSearch(this.session, this.searchBox.value));
    const prev = el("button", undefined, "Prev");
    prev.onclick = () => void this.run(() => {
      this.session.state = cycleMatch(this.session.state, -1);
    });
    const next = el("button", undefined, "Next");
    next.onclick = () => void this.run(() => {
      this.session.state = cycleMatch(this.session.state, 1);
    });
    const undoButton = el("button", undefined, "Undo (Ctrl+Z)");
    undoButton.onclick = () => void this.run(() => undoLast(this.session));

    const revision = el(
      "span",
      "revision",
      this.session.state.doc ? `rev ${this.session.state.doc.revision}` : "no document",
    );

    bar.append(idBox, open, newBox, create, this.searchBox, go, prev, next, undoButton, revision);
    return bar;
  }

  private palettePanel(): HTMLElement {
    const panel = el("div", "palette");
    panel.append(el("h3", undefined, "Rules"));
    for (const rule of this.session.state.palette) {
      const row = el("div", "rule");
      const sig = rule.params.join(", ") + (rule.variadic ? `, ${rule.variadic.type}...` : "");
      row.append(el("code", undefined, `${rule.name}(${sig})`));
      row.append(el("span", "glyphkind", rule.glyph));
      panel.append(row);
    }
    return panel;
  }

  private piecesPanel(): HTMLElement {
    const panel = el("div", "pieces");
    const { state, scenes, svgs } = this.session;
    if (!state.doc) {
      panel.append(el("p", undefined, "Open or create a document to start."));
      return panel;
    }
    state.doc.pieces.forEach((_piece, index) => {
      const scene = scenes.get(index);
      const svg = svgs.get(index);
      if (!scene || svg === undefined) return;
      const holder = el("div", "piece");
      holder.style.width = `${scene.width * PX_PER_EM}px`;
      holder.style.height = `${scene.height * PX_PER_EM}px`;
      holder.innerHTML = svg; // server bytes, shown verbatim
      holder.addEventListener("click", (ev) => {
        const rect = holder.getBoundingClientRect();
        const x = (ev.clientX - rect.left) / PX_PER_EM;
        const y = (ev.clientY - rect.top) / PX_PER_EM;
        void this.run(() => clickPiece(this.session, index, x, y));
      });
      for (const match of state.matches) {
        if (match.piece === index) holder.append(this.highlight(scene, match, "match"));
      }
      if (state.selected?.piece === index) {
        const selected = state.selected;
        holder.append(this.highlight(scene, { piece: index, path: selected.path }, "selected"));
      }
      panel.append(el("div", "piecelabel", `piece ${index}`), holder);
    });
    return panel;
  }

  private highlight(
    scene: Scene,
    match: Pick<MatchJson, "path"> & { piece: number },
    kind: string,
  ): HTMLElement {
    const box = sourceBBox(scene, match.path);
    const overlay = el("div", `highlight ${kind}`);
    if (box) {
      overlay.style.left = `${box[0] * PX_PER_EM}px`;
      overlay.style.top = `${box[1] * PX_PER_EM}px`;
      overlay.style.width = `${(box[2] - box[0]) * PX_PER_EM}px`;
      overlay.style.height = `${(box[3] - box[1]) * PX_PER_EM}px`;
    }
    return overlay;
  }

  private inspectorPanel(): HTMLElement {
    const panel = el("div", "inspector");
    panel.append(el("h3", undefined, "Selection"));
    const { state } = this.session;
    const text = selectedText(state);
    if (!state.selected || text === null) {
      panel.append(el("p", undefined, "Click a glyph to select its node."));
      return panel;
    }
    panel.append(
      el("div", "selpath", `piece ${state.selected.piece}, path "${state.selected.path}"`),
    );
    const code = el("pre", "seltext");
    code.textContent = text;
    panel.append(code);

    const replaceBox = el("input");
    replaceBox.value = text;
    const replace = el("button", undefined, "Replace");
    replace.onclick = () => void this.run(() => applyReplace(this.session, replaceBox.value));

    const wrapSelect = el("select");
    for (const rule of wrappableRules(state.palette)) {
      const option = el("option", undefined, rule.name);
      option.value = rule.name;
      wrapSelect.append(option);
    }
    const wrap = el("button", undefined, "Wrap");
    wrap.onclick = () => void this.run(() => applyWrap(this.session, wrapSelect.value));

    const remove = el("button", undefined, "Delete");
    remove.onclick = () => void this.run(() => applyDelete(this.session));

    panel.append(replaceBox, replace, wrapSelect, wrap, remove);

    const scoreButton = el("button", undefined, "Score preview");
    const scoreOut = el("pre", "score");
    scoreButton.onclick = () =>
      void (async () => {
        const doc = this.session.state.doc;
        const sel = this.session.state.selected;
        if (doc && sel) {
          scoreOut.textContent = await this.session.client.renderScore(doc.id, sel.piece);
        }
      })();
    panel.append(scoreButton, scoreOut);
    return panel;
  }
}
