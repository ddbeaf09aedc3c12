// Scene graph wire format served by `render?format=scene`, plus the
// hit-testing rule the editor uses to turn clicks into node paths.

export interface GlyphRunEl {
  kind: "glyphrun";
  x: number;
  y: number;
  size: number;
  text: string;
  source: string;
}

export interface LineEl {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  source: string;
}

export interface RectEl {
  kind: "rect";
  x: number;
  y: number;
  w: number;
  h: number;
  frame: boolean;
  source: string;
}

export type SceneElement = GlyphRunEl | LineEl | RectEl;

export interface Scene {
  width: number;
  height: number;
  elements: SceneElement[];
}

export type BBox = [x0: number, y0: number, x1: number, y1: number];

export function pathDepth(path: string): number {
  return path === "" ? 0 : path.split(".").length;
}

export function parentPath(path: string): string | null {
  if (path === "") return null;
  const cut = path.lastIndexOf(".");
  return cut < 0 ? "" : path.slice(0, cut);
}

export function bbox(el: SceneElement): BBox {
  switch (el.kind) {
    case "glyphrun": {
      // glyph width is `size` per code point, not per UTF-16 unit
      const codepoints = [...el.text].length;
      return [el.x, el.y, el.x + el.size * codepoints, el.y + el.size];
    }
    case "line":
      return [
        Math.min(el.x1, el.x2),
        Math.min(el.y1, el.y2),
        Math.max(el.x1, el.x2),
        Math.max(el.y1, el.y2),
      ];
    case "rect":
      return [el.x, el.y, el.x + el.w, el.y + el.h];
  }
}

function contains(box: BBox, x: number, y: number): boolean {
  return box[0] <= x && x <= box[2] && box[1] <= y && y <= box[3];
}

/** Source path of the deepest element under (x, y) in em units; depth is
 * the path's index count, ties go to the later-painted element. */
export function hitTest(scene: Scene, x: number, y: number): string | null {
  let best: string | null = null;
  let bestDepth = -1;
  for (const el of scene.elements) {
    if (!contains(bbox(el), x, y)) continue;
    const depth = pathDepth(el.source);
    if (depth >= bestDepth) {
      bestDepth = depth;
      best = el.source;
    }
  }
  return best;
}

/** Union bounding box of every element tagged with `source`; used to draw
 * selection and search highlights. */
export function sourceBBox(scene: Scene, source: string): BBox | null {
  let out: BBox | null = null;
  for (const el of scene.elements) {
    if (el.source !== source) continue;
    const box = bbox(el);
    out = out
      ? [
          Math.min(out[0], box[0]),
          Math.min(out[1], box[1]),
          Math.max(out[2], box[2]),
          Math.max(out[3], box[3]),
        ]
      : box;
  }
  return out;
}

/** A path is still valid in a scene iff some element carries it. */
export function sceneHasPath(scene: Scene, source: string): boolean {
  return scene.elements.some((el) => el.source === source);
}
