import { describe, expect, it } from "vitest";

import { interpretKey } from "../src/keyboard";

const keyMapping = { a: "0", s: "1" };

describe("interpretKey while editing a tape", () => {
  const ctx = { editing: true, keyMapping };

  it("mapped letters append their symbol", () => {
    expect(interpretKey("a", ctx)).toEqual({ type: "append", symbol: "0" });
    expect(interpretKey("s", ctx)).toEqual({ type: "append", symbol: "1" });
  });

  it("unmapped keys do nothing", () => {
    expect(interpretKey("z", ctx)).toEqual({ type: "none" });
    expect(interpretKey("ArrowRight", ctx)).toEqual({ type: "none" });
  });

  it("Delete and Backspace drop the rightmost symbol", () => {
    expect(interpretKey("Delete", ctx)).toEqual({ type: "deleteSymbol" });
    expect(interpretKey("Backspace", ctx)).toEqual({ type: "deleteSymbol" });
  });

  it("Enter commits", () => {
    expect(interpretKey("Enter", ctx)).toEqual({ type: "commit" });
  });
});

describe("interpretKey outside an edit", () => {
  const ctx = { editing: false, keyMapping };

  it("arrows scrub", () => {
    expect(interpretKey("ArrowRight", ctx)).toEqual({ type: "advance" });
    expect(interpretKey("ArrowLeft", ctx)).toEqual({ type: "rewind" });
  });

  it("letters do not edit a committed tape", () => {
    expect(interpretKey("a", ctx)).toEqual({ type: "none" });
  });
});
