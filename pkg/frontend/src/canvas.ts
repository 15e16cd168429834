/**
 * Canvas rendering and build-mode pointer interactions.
 *
 * Geometry lives in exported pure functions so the hit-testing rules are
 * testable without a DOM.  World coordinates are the document's (y up, as
 * in the exported figures); the screen transform flips y and centers the
 * origin.
 *
 * Pointer protocol (build mode):
 *   - Shift+click on empty canvas creates a state at the pointer.
 *   - A state's outer rim is the arrow-start zone: press there and drag to
 *     another state to create a transition (a label prompt follows);
 *     releasing anywhere else cancels.
 *   - Pressing the state body drags it; with grid snap on, positions lock
 *     to half-unit steps.
 *   - Shift+click on a transition label opens the label editor.
 *   - Double-click toggles a state's final flag.
 */

import type { MachineDocument, StateRecord, TransitionRecord } from "./types";
import { EPSILON } from "./types";

export const PX_PER_UNIT = 72;
export const STATE_RADIUS = 0.38; // world units
const RIM_INNER = 0.62; // fraction of the radius where the arrow zone starts
const LABEL_HIT = 0.28;
const GRID_STEP = 0.5;

export interface Point {
  x: number;
  y: number;
}

export interface Viewport {
  width: number;
  height: number;
  center: Point; // world point shown at the canvas center
}

export function worldToScreen(p: Point, vp: Viewport): Point {
  return {
    x: vp.width / 2 + (p.x - vp.center.x) * PX_PER_UNIT,
    y: vp.height / 2 - (p.y - vp.center.y) * PX_PER_UNIT,
  };
}

export function screenToWorld(p: Point, vp: Viewport): Point {
  return {
    x: vp.center.x + (p.x - vp.width / 2) / PX_PER_UNIT,
    y: vp.center.y - (p.y - vp.height / 2) / PX_PER_UNIT,
  };
}

export function snapPoint(p: Point): Point {
  return {
    x: Math.round(p.x / GRID_STEP) * GRID_STEP,
    y: Math.round(p.y / GRID_STEP) * GRID_STEP,
  };
}

export type StateZone = "body" | "rim";

export function hitState(
  doc: MachineDocument,
  world: Point,
): { id: number; zone: StateZone } | null {
  // Later states draw on top, so hit-test in reverse insertion order.
  for (let i = doc.states.length - 1; i >= 0; i--) {
    const s = doc.states[i]!;
    const d = Math.hypot(world.x - s.x, world.y - s.y);
    if (d <= STATE_RADIUS) {
      return { id: s.id, zone: d >= STATE_RADIUS * RIM_INNER ? "rim" : "body" };
    }
  }
  return null;
}

/** Anchor point of a transition's label, in world coordinates. */
export function labelAnchor(doc: MachineDocument, t: TransitionRecord): Point {
  const a = doc.states.find((s) => s.id === t.from);
  const b = doc.states.find((s) => s.id === t.to);
  if (!a || !b) return { x: 0, y: 0 };
  if (t.from === t.to) {
    // Self-loops sit above the state (below for negative curve).
    const dir = t.curve < 0 ? -1 : 1;
    return { x: a.x, y: a.y + dir * (STATE_RADIUS + 0.55) };
  }
  const mx = (a.x + b.x) / 2;
  const my = (a.y + b.y) / 2;
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len = Math.hypot(dx, dy) || 1;
  // Perpendicular offset in the curve's direction, plus a little clearance.
  const off = t.curve * 0.45 + (t.curve === 0 ? 0.22 : 0.22 * Math.sign(t.curve));
  return { x: mx - (dy / len) * off, y: my + (dx / len) * off };
}

export function hitLabel(doc: MachineDocument, world: Point): number | null {
  for (let i = doc.transitions.length - 1; i >= 0; i--) {
    const t = doc.transitions[i]!;
    const anchor = labelAnchor(doc, t);
    if (Math.hypot(world.x - anchor.x, world.y - anchor.y) <= LABEL_HIT) return t.id;
  }
  return null;
}

export function displayLabel(t: TransitionRecord): string {
  return t.symbols.map((s) => (s === EPSILON ? "ε" : s)).join(",");
}

/** What the canvas needs back from the application. */
export interface CanvasDelegate {
  doc(): MachineDocument;
  activeStates(): number[];
  pendingArrow(): number | null;
  selection(): { kind: string; id?: number };
  /** State named by the current validation error, drawn with a red ring. */
  errorState(): number | null;
  buildMode(): boolean;
  gridSnap(): boolean;
  createState(x: number, y: number): void;
  moveState(id: number, x: number, y: number): void;
  beginArrow(source: number): void;
  endArrow(target: number | null): void;
  editLabel(id: number): void;
  select(sel: { kind: "state" | "transition" | "none"; id?: number }): void;
  toggleFinal(id: number): void;
}

interface DragState {
  kind: "move" | "arrow";
  stateId: number;
  moved: boolean;
}

export class CanvasView {
  private drag: DragState | null = null;
  private hover: { id: number; zone: StateZone } | null = null;
  private pointer: Point = { x: 0, y: 0 };

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly delegate: CanvasDelegate,
  ) {
    canvas.addEventListener("pointerdown", (e) => this.onDown(e));
    canvas.addEventListener("pointermove", (e) => this.onMove(e));
    canvas.addEventListener("pointerup", (e) => this.onUp(e));
    canvas.addEventListener("dblclick", (e) => this.onDouble(e));
  }

  private viewport(): Viewport {
    const doc = this.delegate.doc();
    let cx = 0;
    let cy = 0;
    if (doc.states.length > 0) {
      for (const s of doc.states) {
        cx += s.x;
        cy += s.y;
      }
      cx /= doc.states.length;
      cy /= doc.states.length;
    }
    return { width: this.canvas.width, height: this.canvas.height, center: { x: cx, y: cy } };
  }

  private eventWorld(e: MouseEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return screenToWorld(
      { x: e.clientX - rect.left, y: e.clientY - rect.top },
      this.viewport(),
    );
  }

  private onDown(e: PointerEvent): void {
    if (!this.delegate.buildMode()) return;
    const world = this.eventWorld(e);
    const hit = hitState(this.delegate.doc(), world);
    if (hit) {
      this.canvas.setPointerCapture(e.pointerId);
      if (hit.zone === "rim") {
        this.drag = { kind: "arrow", stateId: hit.id, moved: false };
        this.delegate.beginArrow(hit.id);
      } else {
        this.drag = { kind: "move", stateId: hit.id, moved: false };
        this.delegate.select({ kind: "state", id: hit.id });
      }
      return;
    }
    const label = hitLabel(this.delegate.doc(), world);
    if (label !== null && e.shiftKey) {
      this.delegate.editLabel(label);
      return;
    }
    if (label !== null) {
      this.delegate.select({ kind: "transition", id: label });
      return;
    }
    if (e.shiftKey) {
      const p = this.delegate.gridSnap() ? snapPoint(world) : world;
      this.delegate.createState(p.x, p.y);
      return;
    }
    this.delegate.select({ kind: "none" });
  }

  private onMove(e: PointerEvent): void {
    const world = this.eventWorld(e);
    this.pointer = world;
    if (this.drag?.kind === "move") {
      this.drag.moved = true;
      const p = this.delegate.gridSnap() ? snapPoint(world) : world;
      this.delegate.moveState(this.drag.stateId, p.x, p.y);
    } else {
      this.hover = hitState(this.delegate.doc(), world);
    }
    this.render();
  }

  private onUp(e: PointerEvent): void {
    const drag = this.drag;
    this.drag = null;
    if (!drag) return;
    if (drag.kind === "arrow") {
      const hit = hitState(this.delegate.doc(), this.eventWorld(e));
      this.delegate.endArrow(hit ? hit.id : null);
    }
    this.render();
  }

  private onDouble(e: MouseEvent): void {
    if (!this.delegate.buildMode()) return;
    const hit = hitState(this.delegate.doc(), this.eventWorld(e));
    if (hit) this.delegate.toggleFinal(hit.id);
  }

  // -- drawing -----------------------------------------------------------

  render(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const vp = this.viewport();
    const doc = this.delegate.doc();
    const active = new Set(this.delegate.activeStates());
    const selection = this.delegate.selection();

    ctx.clearRect(0, 0, vp.width, vp.height);
    ctx.font = "15px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";

    for (const t of doc.transitions) this.drawTransition(ctx, vp, doc, t, selection);
    for (const s of doc.states) this.drawState(ctx, vp, s, active, selection);

    const pending = this.delegate.pendingArrow();
    if (pending !== null) {
      const source = doc.states.find((s) => s.id === pending);
      if (source) {
        const a = worldToScreen(source, vp);
        const b = worldToScreen(this.pointer, vp);
        ctx.save();
        ctx.strokeStyle = "#888";
        ctx.setLineDash([6, 4]);
        ctx.beginPath();
        ctx.moveTo(a.x, a.y);
        ctx.lineTo(b.x, b.y);
        ctx.stroke();
        ctx.restore();
      }
    }
  }

  private drawState(
    ctx: CanvasRenderingContext2D,
    vp: Viewport,
    s: StateRecord,
    active: Set<number>,
    selection: { kind: string; id?: number },
  ): void {
    const p = worldToScreen(s, vp);
    const r = STATE_RADIUS * PX_PER_UNIT;
    const isActive = active.has(s.id);
    const isSelected = selection.kind === "state" && selection.id === s.id;
    const isError = this.delegate.errorState() === s.id;
    const showRim =
      this.hover?.id === s.id && this.hover.zone === "rim" && this.delegate.buildMode();

    ctx.save();
    ctx.lineWidth = isActive || isError ? 3.5 : 1.5;
    ctx.strokeStyle = isError ? "#c21807" : isSelected ? "#0b62d6" : "#222";
    ctx.fillStyle = isActive ? "#fff3c4" : "#fff";
    ctx.beginPath();
    ctx.arc(p.x, p.y, r, 0, Math.PI * 2);
    ctx.fill();
    ctx.stroke();
    if (s.isFinal) {
      ctx.beginPath();
      ctx.arc(p.x, p.y, r - 5, 0, Math.PI * 2);
      ctx.stroke();
    }
    if (showRim) {
      ctx.strokeStyle = "#0b62d6";
      ctx.setLineDash([3, 3]);
      ctx.beginPath();
      ctx.arc(p.x, p.y, r + 4, 0, Math.PI * 2);
      ctx.stroke();
      ctx.setLineDash([]);
    }
    if (s.isStart) {
      ctx.strokeStyle = "#222";
      ctx.beginPath();
      ctx.moveTo(p.x - r - 26, p.y);
      ctx.lineTo(p.x - r - 4, p.y);
      ctx.lineTo(p.x - r - 12, p.y - 6);
      ctx.moveTo(p.x - r - 4, p.y);
      ctx.lineTo(p.x - r - 12, p.y + 6);
      ctx.stroke();
    }
    ctx.fillStyle = "#111";
    ctx.font = isActive ? "bold 15px system-ui, sans-serif" : "15px system-ui, sans-serif";
    ctx.fillText(s.name, p.x, p.y);
    ctx.restore();
  }

  private drawTransition(
    ctx: CanvasRenderingContext2D,
    vp: Viewport,
    doc: MachineDocument,
    t: TransitionRecord,
    selection: { kind: string; id?: number },
  ): void {
    const a = doc.states.find((s) => s.id === t.from);
    const b = doc.states.find((s) => s.id === t.to);
    if (!a || !b) return;
    const isSelected = selection.kind === "transition" && selection.id === t.id;
    ctx.save();
    ctx.strokeStyle = isSelected ? "#0b62d6" : "#444";
    ctx.fillStyle = ctx.strokeStyle;
    ctx.lineWidth = 1.5;

    const r = STATE_RADIUS;
    if (t.from === t.to) {
      const dir = t.curve < 0 ? -1 : 1;
      const center = worldToScreen({ x: a.x, y: a.y + dir * (r + 0.28) }, vp);
      ctx.beginPath();
      ctx.arc(center.x, center.y, 0.24 * PX_PER_UNIT, 0, Math.PI * 2);
      ctx.stroke();
    } else {
      // Quadratic curve whose control point carries the curve offset.
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const len = Math.hypot(dx, dy) || 1;
      const ux = dx / len;
      const uy = dy / len;
      const mid = {
        x: (a.x + b.x) / 2 - (uy * t.curve * len) / 3,
        y: (a.y + b.y) / 2 + (ux * t.curve * len) / 3,
      };
      const from = worldToScreen({ x: a.x + ux * r, y: a.y + uy * r }, vp);
      const to = worldToScreen({ x: b.x - ux * r, y: b.y - uy * r }, vp);
      const ctl = worldToScreen(mid, vp);
      ctx.beginPath();
      ctx.moveTo(from.x, from.y);
      ctx.quadraticCurveTo(ctl.x, ctl.y, to.x, to.y);
      ctx.stroke();
      // Arrowhead along the curve's final tangent.
      const angle = Math.atan2(to.y - ctl.y, to.x - ctl.x);
      ctx.beginPath();
      ctx.moveTo(to.x, to.y);
      ctx.lineTo(to.x - 10 * Math.cos(angle - 0.4), to.y - 10 * Math.sin(angle - 0.4));
      ctx.lineTo(to.x - 10 * Math.cos(angle + 0.4), to.y - 10 * Math.sin(angle + 0.4));
      ctx.closePath();
      ctx.fill();
    }

    const anchor = worldToScreen(labelAnchor(doc, t), vp);
    ctx.fillStyle = isSelected ? "#0b62d6" : "#111";
    ctx.fillText(displayLabel(t), anchor.x, anchor.y);
    ctx.restore();
  }
}
