// Span navigation over the server's canonical expression text.  The
// canonical form is fully deterministic (`name(a, b)`, natives `@p`,
// `#left`, `12.5`), so subtrees can be located without a full parser.

const NAME_CHAR = /[a-z0-9-]/;
const POINT_CHAR = /[A-Za-z0-9-]/;
const NUMBER_CHAR = /[0-9.]/;

export type NodeKind = "rule" | "point" | "side" | "number";

export function nodeKind(text: string): NodeKind {
  const c = text[0];
  if (c === "@") return "point";
  if (c === "#") return "side";
  if (c === "-" || (c !== undefined && c >= "0" && c <= "9")) return "number";
  return "rule";
}

function scanWhile(text: string, pos: number, re: RegExp): number {
  while (pos < text.length && re.test(text[pos]!)) pos++;
  return pos;
}

/** End offset (exclusive) of the expression starting at `pos`. */
export function exprEnd(text: string, pos: number): number {
  const c = text[pos];
  if (c === undefined) throw new Error(`no expression at offset ${pos}`);
  if (c === "@") return scanWhile(text, pos + 1, POINT_CHAR);
  if (c === "#") return scanWhile(text, pos + 1, NAME_CHAR);
  if (c === "-" || (c >= "0" && c <= "9")) return scanWhile(text, pos + 1, NUMBER_CHAR);
  pos = scanWhile(text, pos, NAME_CHAR);
  if (text[pos] !== "(") throw new Error(`expected "(" at offset ${pos}`);
  pos++;
  if (text[pos] === ")") return pos + 1;
  for (;;) {
    pos = exprEnd(text, pos);
    if (text[pos] === ")") return pos + 1;
    if (!text.startsWith(", ", pos)) {
      throw new Error(`expected ", " or ")" at offset ${pos}`);
    }
    pos += 2;
  }
}

/** Start offset of the `index`-th child of the rule application at `pos`. */
function childStart(text: string, pos: number, index: number): number {
  pos = scanWhile(text, pos, NAME_CHAR);
  if (text[pos] !== "(") throw new Error("native nodes have no children");
  pos++;
  for (let i = 0; i < index; i++) {
    if (text[pos] === ")") throw new Error(`child ${index} out of range`);
    pos = exprEnd(text, pos) + 2; // skip ", "
  }
  if (text[pos] === ")" || pos > text.length) {
    throw new Error(`child ${index} out of range`);
  }
  return pos;
}

/** Canonical text of the subtree at a dotted path ("" is the whole piece). */
export function subtreeText(piece: string, path: string): string {
  let pos = 0;
  if (path !== "") {
    for (const part of path.split(".")) {
      pos = childStart(piece, pos, Number(part));
    }
  }
  return piece.slice(pos, exprEnd(piece, pos));
}
