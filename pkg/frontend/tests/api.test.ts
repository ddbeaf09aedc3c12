import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, Client } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("Client", () => {
  it("returns parsed documents", async () => {
    const doc = { id: "x", revision: 1, pieces: ["dog()"] };
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(200, doc)));
    expect(await new Client().getDocument("x")).toEqual(doc);
  });

  it("maps 409 to an ApiError with the conflict status", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse(409, { detail: { message: "stale", current: 4 } })),
    );
    const err = await new Client()
      .patchReplace("x", 0, "", 1, "dog()")
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).message).toBe("stale");
  });

  it("maps 422 line errors to a readable message", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        jsonResponse(422, { detail: [{ line: 1, offset: 4, message: "expected ')'" }] }),
      ),
    );
    const err = await new Client().createDocument(["dog("]).catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).message).toContain("line 1");
  });

  it("passes through text renderings untouched", async () => {
    const svg = '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 16 16"/>';
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response(svg, { status: 200, headers: { "content-type": "image/svg+xml" } })),
    );
    expect(await new Client().renderSvg("x", 0)).toBe(svg);
  });

  it("sends wrap bodies with revision, rule and slot", async () => {
    const calls: unknown[] = [];
    vi.stubGlobal(
      "fetch",
      vi.fn(async (_url: string, init?: RequestInit) => {
        calls.push(JSON.parse(String(init?.body)));
        return jsonResponse(200, { id: "x", revision: 2, pieces: ["non-subjectivity(dog())"] });
      }),
    );
    await new Client().patchWrap("x", 0, "", 1, "non-subjectivity", 0);
    expect(calls[0]).toEqual({ revision: 1, wrap: { rule: "non-subjectivity", slot: 0 } });
  });
});
