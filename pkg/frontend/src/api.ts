// Typed client for the document service.  The editor never touches
// document state except through these calls.

import type { Scene } from "./scene.js";

export interface DocumentJson {
  id: string;
  revision: number;
  pieces: string[];
}

export interface MatchJson {
  piece: number;
  path: string;
  bindings: Record<string, string>;
}

export interface RuleInfo {
  name: string;
  params: string[];
  variadic: { type: string; min: number } | null;
  glyph: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : extractMessage(detail) ?? `HTTP ${status}`);
  }
}

function extractMessage(detail: unknown): string | null {
  if (detail && typeof detail === "object") {
    const d = detail as Record<string, unknown>;
    if (typeof d.message === "string") return d.message;
    if (Array.isArray(detail) && detail.length > 0) {
      const first = detail[0] as Record<string, unknown>;
      if (typeof first.message === "string") return `line ${first.line}: ${first.message}`;
    }
  }
  return null;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    let detail: unknown = resp.statusText;
    try {
      detail = ((await resp.json()) as { detail?: unknown }).detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  const type = resp.headers.get("content-type") ?? "";
  if (type.includes("application/json")) return (await resp.json()) as T;
  return (await resp.text()) as T;
}

function jsonInit(method: string, body: unknown): RequestInit {
  return {
    method,
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class Client {
  constructor(readonly base: string = "") {}

  createDocument(pieces: string[]): Promise<DocumentJson> {
    return request(`${this.base}/documents`, jsonInit("POST", { pieces }));
  }

  getDocument(id: string): Promise<DocumentJson> {
    return request(`${this.base}/documents/${id}`);
  }

  patchReplace(
    id: string,
    piece: number,
    path: string,
    revision: number,
    replace: string,
  ): Promise<DocumentJson> {
    return request(
      `${this.base}/documents/${id}/pieces/${piece}/node/${path}`,
      jsonInit("PATCH", { revision, replace }),
    );
  }

  patchWrap(
    id: string,
    piece: number,
    path: string,
    revision: number,
    rule: string,
    slot: number,
  ): Promise<DocumentJson> {
    return request(
      `${this.base}/documents/${id}/pieces/${piece}/node/${path}`,
      jsonInit("PATCH", { revision, wrap: { rule, slot } }),
    );
  }

  undo(id: string, revision: number): Promise<DocumentJson> {
    return request(`${this.base}/documents/${id}/undo`, jsonInit("POST", { revision }));
  }

  renderSvg(id: string, piece: number): Promise<string> {
    return request(`${this.base}/documents/${id}/pieces/${piece}/render?format=svg`);
  }

  renderScene(id: string, piece: number): Promise<Scene> {
    return request(`${this.base}/documents/${id}/pieces/${piece}/render?format=scene`);
  }

  renderScore(id: string, piece: number): Promise<string> {
    return request(`${this.base}/documents/${id}/pieces/${piece}/render?format=score`);
  }

  query(id: string, pattern: string): Promise<MatchJson[]> {
    return request(`${this.base}/documents/${id}/query`, jsonInit("POST", { pattern }));
  }

  rules(): Promise<RuleInfo[]> {
    return request(`${this.base}/rules`);
  }

  points(): Promise<string[]> {
    return request(`${this.base}/points`);
  }
}
