import { describe, expect, it } from "vitest";

import { exprEnd, nodeKind, subtreeText } from "../src/expr.js";

const E1 = "info-about(dog(), non-subjectivity(nice-kind()))";

describe("subtreeText", () => {
  it("returns the whole piece for the root path", () => {
    expect(subtreeText(E1, "")).toBe(E1);
  });

  it("navigates child indices", () => {
    expect(subtreeText(E1, "0")).toBe("dog()");
    expect(subtreeText(E1, "1")).toBe("non-subjectivity(nice-kind())");
    expect(subtreeText(E1, "1.0")).toBe("nice-kind()");
  });

  it("handles native leaves", () => {
    const piece = "localised-discourse(@Lssp, scar-between(@abdomen-hi, @abdomen-lo))";
    expect(subtreeText(piece, "0")).toBe("@Lssp");
    expect(subtreeText(piece, "1.1")).toBe("@abdomen-lo");
    expect(subtreeText("f(-12.5, #left)", "0")).toBe("-12.5");
    expect(subtreeText("f(-12.5, #left)", "1")).toBe("#left");
  });

  it("rejects out-of-range children", () => {
    expect(() => subtreeText(E1, "2")).toThrow(/out of range/);
    expect(() => subtreeText(E1, "0.0")).toThrow();
  });
});

describe("exprEnd", () => {
  it("spans nested applications", () => {
    expect(E1.slice(0, exprEnd(E1, 0))).toBe(E1);
    const inner = E1.indexOf("non-subjectivity");
    expect(E1.slice(inner, exprEnd(E1, inner))).toBe("non-subjectivity(nice-kind())");
  });
});

describe("nodeKind", () => {
  it("classifies canonical text", () => {
    expect(nodeKind("dog()")).toBe("rule");
    expect(nodeKind("@Lssp")).toBe("point");
    expect(nodeKind("#left")).toBe("side");
    expect(nodeKind("-3.5")).toBe("number");
    expect(nodeKind("12")).toBe("number");
  });
});
