/**
 * Wire types for the machine service.
 *
 * These mirror the server's JSON document format and response bodies
 * exactly; the client never invents fields of its own.  All semantics
 * (acceptance, traces, validation, definitions) come from the server —
 * the shapes here are transport only.
 */

/** The reserved epsilon symbol, stored verbatim in documents. */
export const EPSILON = "\\epsilon";

export interface StateRecord {
  id: number;
  name: string;
  x: number;
  y: number;
  isStart: boolean;
  isFinal: boolean;
}

export interface TransitionRecord {
  id: number;
  from: number;
  to: number;
  symbols: string[];
  curve: number;
}

export interface MachineDocument {
  formatVersion: 1;
  name: string;
  states: StateRecord[];
  transitions: TransitionRecord[];
}

export type MachineKind = "dfa" | "nfa";

export interface ValidationError {
  code: string;
  state?: number;
  symbol?: string;
  message: string;
}

export interface ValidateResponse {
  ok: boolean;
  error?: ValidationError;
}

/** Successful run: acceptance plus the whole trace of active state sets. */
export interface RunResult {
  accepted: boolean;
  trace: number[][];
}

export interface MachineSummary {
  id: string;
  name: string;
}

export interface ExportResult {
  source: string;
  nodeNames: Record<string, string>;
}

export interface AlphabetResult {
  alphabet: string[];
  keyMapping: Record<string, string>;
}

/** Error envelope used by every non-2xx response. */
export interface ApiErrorBody {
  httpStatus: number;
  code: string;
  message: string;
  details?: unknown;
}

export function emptyDocument(name: string): MachineDocument {
  return { formatVersion: 1, name, states: [], transitions: [] };
}
