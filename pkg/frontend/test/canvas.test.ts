import { describe, expect, it } from "vitest";

import {
  PX_PER_UNIT,
  STATE_RADIUS,
  displayLabel,
  hitLabel,
  hitState,
  labelAnchor,
  screenToWorld,
  snapPoint,
  worldToScreen,
} from "../src/canvas";
import { addState, addTransition } from "../src/document";
import { EPSILON, emptyDocument } from "../src/types";

const vp = { width: 800, height: 600, center: { x: 0, y: 0 } };

describe("coordinate transforms", () => {
  it("screenToWorld inverts worldToScreen", () => {
    for (const p of [{ x: 0, y: 0 }, { x: 3, y: -2.5 }, { x: -1.25, y: 4 }]) {
      const back = screenToWorld(worldToScreen(p, vp), vp);
      expect(back.x).toBeCloseTo(p.x, 10);
      expect(back.y).toBeCloseTo(p.y, 10);
    }
  });

  it("screen y grows downward while world y grows upward", () => {
    const above = worldToScreen({ x: 0, y: 1 }, vp);
    const below = worldToScreen({ x: 0, y: -1 }, vp);
    expect(above.y).toBeLessThan(below.y);
    expect(above.y).toBe(300 - PX_PER_UNIT);
  });

  it("snapPoint locks to half-unit steps", () => {
    expect(snapPoint({ x: 1.26, y: -0.74 })).toEqual({ x: 1.5, y: -0.5 });
    expect(snapPoint({ x: 0.24, y: 0.25 })).toEqual({ x: 0, y: 0.5 });
  });
});

describe("hit testing", () => {
  const doc = addState(addState(emptyDocument("M"), 0, 0, 0), 1, 3, 0);

  it("the state body and rim are distinct zones", () => {
    expect(hitState(doc, { x: 0, y: 0 })).toEqual({ id: 0, zone: "body" });
    expect(hitState(doc, { x: STATE_RADIUS * 0.95, y: 0 })).toEqual({ id: 0, zone: "rim" });
    expect(hitState(doc, { x: STATE_RADIUS * 1.5, y: 0 })).toBeNull();
  });

  it("overlapping states resolve to the one drawn on top", () => {
    const stacked = addState(addState(emptyDocument("M"), 0, 0, 0), 1, 0.1, 0);
    expect(hitState(stacked, { x: 0.1, y: 0 })!.id).toBe(1);
  });

  it("labels are clickable near their anchor", () => {
    const withArrow = addTransition(doc, 0, 0, 1, ["0"]);
    const anchor = labelAnchor(withArrow, withArrow.transitions[0]!);
    expect(hitLabel(withArrow, anchor)).toBe(0);
    expect(hitLabel(withArrow, { x: anchor.x, y: anchor.y + 5 })).toBeNull();
  });

  it("self-loop labels sit above the state (below for negative curve)", () => {
    const above = addTransition(doc, 0, 0, 0, ["0"], 1);
    const below = addTransition(doc, 0, 0, 0, ["0"], -1);
    expect(labelAnchor(above, above.transitions[0]!).y).toBeGreaterThan(0);
    expect(labelAnchor(below, below.transitions[0]!).y).toBeLessThan(0);
  });
});

describe("labels", () => {
  it("epsilon renders as the glyph, other symbols verbatim", () => {
    expect(displayLabel({ id: 0, from: 0, to: 1, symbols: [EPSILON], curve: 0 })).toBe("ε");
    expect(displayLabel({ id: 0, from: 0, to: 1, symbols: ["0", "a_1"], curve: 0 })).toBe("0,a_1");
  });
});
