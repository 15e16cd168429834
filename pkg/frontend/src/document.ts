/**
 * Pure edit operations on MachineDocument values.
 *
 * Every function returns a new document; nothing is mutated.  These run
 * against the local mirror only — the server re-checks everything on PUT,
 * and a rejected PUT rolls the mirror back — so the guards here exist just
 * to keep obviously-broken documents from being rendered mid-flight.
 *
 * Ids are passed in by the caller (the editor store keeps high-water-mark
 * counters so ids of deleted elements are never handed out again, matching
 * the server's allocation rule).
 */

import type { MachineDocument, StateRecord, TransitionRecord } from "./types";
import { EPSILON } from "./types";

export function nextIds(doc: MachineDocument): { state: number; transition: number } {
  const state = doc.states.reduce((acc, s) => Math.max(acc, s.id + 1), 0);
  const transition = doc.transitions.reduce((acc, t) => Math.max(acc, t.id + 1), 0);
  return { state, transition };
}

function freeName(doc: MachineDocument): string {
  const used = new Set(doc.states.map((s) => s.name));
  let k = 0;
  while (used.has(`q_${k}`)) k += 1;
  return `q_${k}`;
}

export function addState(
  doc: MachineDocument,
  id: number,
  x: number,
  y: number,
  name?: string,
): MachineDocument {
  const record: StateRecord = {
    id,
    name: name ?? freeName(doc),
    x,
    y,
    isStart: false,
    isFinal: false,
  };
  return { ...doc, states: [...doc.states, record] };
}

/** Removing a state takes every transition touching it along. */
export function removeState(doc: MachineDocument, id: number): MachineDocument {
  return {
    ...doc,
    states: doc.states.filter((s) => s.id !== id),
    transitions: doc.transitions.filter((t) => t.from !== id && t.to !== id),
  };
}

export function addTransition(
  doc: MachineDocument,
  id: number,
  from: number,
  to: number,
  symbols: string[],
  curve = 0,
): MachineDocument {
  const record: TransitionRecord = { id, from, to, symbols, curve };
  return { ...doc, transitions: [...doc.transitions, record] };
}

export function removeTransition(doc: MachineDocument, id: number): MachineDocument {
  return { ...doc, transitions: doc.transitions.filter((t) => t.id !== id) };
}

export function setLabel(doc: MachineDocument, id: number, symbols: string[]): MachineDocument {
  return {
    ...doc,
    transitions: doc.transitions.map((t) => (t.id === id ? { ...t, symbols } : t)),
  };
}

export function patchState(
  doc: MachineDocument,
  id: number,
  patch: Partial<Pick<StateRecord, "name" | "x" | "y" | "isStart" | "isFinal">>,
): MachineDocument {
  return {
    ...doc,
    states: doc.states.map((s) => (s.id === id ? { ...s, ...patch } : s)),
  };
}

export function renameMachine(doc: MachineDocument, name: string): MachineDocument {
  return { ...doc, name };
}

export function stateById(doc: MachineDocument, id: number): StateRecord | undefined {
  return doc.states.find((s) => s.id === id);
}

export function transitionById(doc: MachineDocument, id: number): TransitionRecord | undefined {
  return doc.transitions.find((t) => t.id === id);
}

/** Parse a label as typed by the user: comma-separated, blanks dropped.
 * "ε" (or "eps") is shorthand for the stored epsilon symbol. */
export function parseLabel(text: string): string[] {
  return text
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => (part === "ε" || part === "eps" ? EPSILON : part));
}

export function formatLabel(symbols: string[]): string {
  return symbols.map((s) => (s === EPSILON ? "ε" : s)).join(",");
}
