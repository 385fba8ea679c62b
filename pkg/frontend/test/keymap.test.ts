import { describe, expect, it } from "vitest";

import { describeBindings, opForKey } from "../src/keymap.js";

function alt(key: string) {
  return { key, altKey: true, ctrlKey: false, metaKey: false };
}

describe("opForKey", () => {
  it("binds the default table", () => {
    expect(opForKey(alt("ArrowUp"))).toBe("up");
    expect(opForKey(alt("t"))).toBe("transpose");
    expect(opForKey(alt("d"))).toBe("delete");
    expect(opForKey(alt("s"))).toBe("select");
    expect(opForKey(alt("n"))).toBe("next");
    expect(opForKey(alt("p"))).toBe("prev");
    expect(opForKey(alt("e"))).toBe("extract");
    expect(opForKey(alt("b"))).toBe("jump");
  });

  it("is case-insensitive for letter keys", () => {
    expect(opForKey(alt("T"))).toBe("transpose");
  });

  it("returns null for anything unbound", () => {
    expect(opForKey(alt("x"))).toBeNull();
    expect(opForKey(alt("ArrowLeft"))).toBeNull();
    expect(opForKey({ key: "t", altKey: false, ctrlKey: false, metaKey: false })).toBeNull();
    expect(opForKey({ key: "t", altKey: true, ctrlKey: true, metaKey: false })).toBeNull();
    expect(opForKey({ key: "t", altKey: true, ctrlKey: false, metaKey: true })).toBeNull();
  });

  it("describes every binding for the help line", () => {
    const lines = describeBindings();
    expect(lines).toContain("Alt+ArrowUp — up");
    expect(lines.length).toBe(8);
  });
});
