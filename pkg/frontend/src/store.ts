/**
 * Editor state store: one machine, three modes, an optimistic mirror.
 *
 * The mirror is the local copy of the machine document.  Edits land on it
 * immediately (so the canvas never lags the pointer) and are pushed to the
 * server as whole-document PUTs.  The mirror may diverge from the server
 * only between an edit and its PUT acknowledgment:
 *
 *   - at most one PUT is in flight; edits made meanwhile coalesce into a
 *     single trailing PUT of the latest mirror (documents replace wholesale,
 *     so the last write carries every earlier edit),
 *   - a failed PUT rolls the mirror back to the last acknowledged document
 *     and surfaces the server's message inline.
 *
 * Semantics never come from this file: acceptance, traces, validation
 * errors, definitions and alphabets are all fetched.  Traces are fetched
 * whole per tape and sliced by ticker locally, which is exact because a
 * run's trace at step k depends only on the first k symbols.
 */

import { ApiClient, ApiError } from "./api";
import {
  addState,
  addTransition,
  nextIds,
  parseLabel,
  patchState,
  removeState,
  removeTransition,
  renameMachine,
  setLabel,
} from "./document";
import type {
  AlphabetResult,
  MachineDocument,
  MachineKind,
  RunResult,
  ValidationError,
} from "./types";

export type Mode = "build" | "simulate" | "export";

export type Selection =
  | { kind: "state"; id: number }
  | { kind: "transition"; id: number }
  | { kind: "none" };

export interface TapeState {
  id: number;
  /** Committed symbols; the server has been asked about exactly these. */
  symbols: string[];
  /** Uncommitted edit in progress, or null when not editing. */
  draft: string[] | null;
  ticker: number;
  result: RunResult | null;
}

export interface EditorState {
  mode: Mode;
  machineId: string;
  doc: MachineDocument;
  selection: Selection;
  /** Source state of an arrow drag in progress. */
  pendingArrow: number | null;
  tapes: TapeState[];
  activeTape: number | null;
  kind: MachineKind;
  lastValidationError: ValidationError | null;
  /** Inline message from a rejected edit, cleared on the next edit. */
  editError: string | null;
  syncing: boolean;
  definitionText: string | null;
  alphabet: AlphabetResult | null;
}

export class EditorStore {
  private state: EditorState;
  private acked: MachineDocument;
  private inflight = false;
  private dirty = false;
  private listeners = new Set<() => void>();
  // High-water marks: ids of deleted elements are never reused, matching
  // the server's allocation rule.
  private nextStateId: number;
  private nextTransitionId: number;
  private nextTapeId = 0;
  // Bumped whenever the document changes server-side; stale fetch
  // responses are dropped by comparing against it.
  private generation = 0;

  constructor(
    private readonly api: ApiClient,
    machineId: string,
    doc: MachineDocument,
  ) {
    this.acked = doc;
    const ids = nextIds(doc);
    this.nextStateId = ids.state;
    this.nextTransitionId = ids.transition;
    this.state = {
      mode: "build",
      machineId,
      doc,
      selection: { kind: "none" },
      pendingArrow: null,
      tapes: [],
      activeTape: null,
      kind: "nfa",
      lastValidationError: null,
      editError: null,
      syncing: false,
      definitionText: null,
      alphabet: null,
    };
  }

  getState(): EditorState {
    return this.state;
  }

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private set(patch: Partial<EditorState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener();
  }

  // -- document edits (optimistic) --------------------------------------

  private edit(next: MachineDocument): void {
    this.set({ doc: next, editError: null });
    void this.sync();
  }

  private async sync(): Promise<void> {
    if (this.inflight) {
      this.dirty = true;
      return;
    }
    this.inflight = true;
    this.set({ syncing: true });
    try {
      while (true) {
        const sent = this.state.doc;
        this.dirty = false;
        try {
          await this.api.putMachine(this.state.machineId, sent);
          this.acked = sent;
          this.generation += 1;
        } catch (err) {
          this.dirty = false;
          this.set({
            doc: this.acked,
            editError: err instanceof ApiError ? err.message : String(err),
          });
          break;
        }
        if (!this.dirty) break;
      }
    } finally {
      this.inflight = false;
      this.set({ syncing: false });
    }
    await this.refreshSemantics();
  }

  /** Resolves once no PUT is in flight or queued (test hook). */
  async settled(): Promise<void> {
    while (this.inflight || this.dirty) {
      await new Promise((resolve) => setTimeout(resolve, 1));
    }
  }

  createState(x: number, y: number): number {
    const id = this.nextStateId++;
    this.edit(addState(this.state.doc, id, x, y));
    return id;
  }

  deleteState(id: number): void {
    if (this.state.selection.kind === "state" && this.state.selection.id === id) {
      this.set({ selection: { kind: "none" } });
    }
    this.edit(removeState(this.state.doc, id));
  }

  createTransition(from: number, to: number, labelText: string, curve = 0): number | null {
    const symbols = parseLabel(labelText);
    if (symbols.length === 0) {
      this.set({ editError: "a transition needs at least one symbol" });
      return null;
    }
    const id = this.nextTransitionId++;
    this.edit(addTransition(this.state.doc, id, from, to, symbols, curve));
    return id;
  }

  deleteTransition(id: number): void {
    if (this.state.selection.kind === "transition" && this.state.selection.id === id) {
      this.set({ selection: { kind: "none" } });
    }
    this.edit(removeTransition(this.state.doc, id));
  }

  relabelTransition(id: number, labelText: string): void {
    const symbols = parseLabel(labelText);
    if (symbols.length === 0) {
      this.set({ editError: "a transition needs at least one symbol" });
      return;
    }
    this.edit(setLabel(this.state.doc, id, symbols));
  }

  moveState(id: number, x: number, y: number): void {
    this.edit(patchState(this.state.doc, id, { x, y }));
  }

  renameState(id: number, name: string): void {
    this.edit(patchState(this.state.doc, id, { name }));
  }

  toggleStart(id: number): void {
    const current = this.state.doc.states.find((s) => s.id === id);
    if (current) this.edit(patchState(this.state.doc, id, { isStart: !current.isStart }));
  }

  toggleFinal(id: number): void {
    const current = this.state.doc.states.find((s) => s.id === id);
    if (current) this.edit(patchState(this.state.doc, id, { isFinal: !current.isFinal }));
  }

  setMachineName(name: string): void {
    this.edit(renameMachine(this.state.doc, name));
  }

  // -- selection and drag state ------------------------------------------

  select(selection: Selection): void {
    this.set({ selection });
  }

  beginArrow(source: number): void {
    this.set({ pendingArrow: source });
  }

  /** Releasing anywhere but over a state cancels the arrow. */
  endArrow(target: number | null, labelText?: string): void {
    const source = this.state.pendingArrow;
    this.set({ pendingArrow: null });
    if (source === null || target === null) return;
    this.createTransition(source, target, labelText ?? "");
  }

  // -- modes and semantics -----------------------------------------------

  async setMode(mode: Mode): Promise<void> {
    this.set({ mode });
    if (mode === "simulate") await this.refreshSemantics();
  }

  async setKind(kind: MachineKind): Promise<void> {
    this.set({ kind });
    await this.refreshSemantics();
  }

  /** Re-fetch everything the server derives from the current document. */
  async refreshSemantics(): Promise<void> {
    const expected = this.generation;
    const { machineId, kind } = this.state;
    try {
      const [validation, definition, alphabet] = await Promise.all([
        this.api.validate(machineId, kind),
        this.api.definition(machineId),
        this.api.alphabet(machineId).catch(() => null),
      ]);
      if (this.generation !== expected) return;
      this.set({
        lastValidationError: validation.ok ? null : (validation.error ?? null),
        definitionText: definition.text,
        alphabet,
      });
      await this.rerunTapes(expected);
    } catch (err) {
      if (this.generation !== expected) return;
      this.set({ editError: err instanceof ApiError ? err.message : String(err) });
    }
  }

  private async rerunTapes(expected: number): Promise<void> {
    const { machineId, kind } = this.state;
    const runs = await Promise.all(
      this.state.tapes.map(async (tape) => {
        const outcome = await this.api.run(machineId, tape.symbols, kind);
        return { tape, outcome };
      }),
    );
    if (this.generation !== expected) return;
    const tapes = this.state.tapes.map((tape) => {
      const match = runs.find((r) => r.tape.id === tape.id);
      if (!match) return tape;
      const { outcome } = match;
      if ("accepted" in outcome) {
        return { ...tape, result: { accepted: outcome.accepted, trace: outcome.trace } };
      }
      // kind=dfa on an invalid machine: the run endpoint returns the
      // diagnostic instead; the panel shows it, the tape has no result.
      this.set({ lastValidationError: outcome.error });
      return { ...tape, result: null };
    });
    this.set({ tapes });
  }

  // -- tapes ----------------------------------------------------------------

  addTape(): number {
    const id = this.nextTapeId++;
    const tape: TapeState = { id, symbols: [], draft: [], ticker: 0, result: null };
    this.set({ tapes: [...this.state.tapes, tape], activeTape: id });
    return id;
  }

  deleteTape(id: number): void {
    const tapes = this.state.tapes.filter((t) => t.id !== id);
    const activeTape = this.state.activeTape === id ? null : this.state.activeTape;
    this.set({ tapes, activeTape });
  }

  selectTape(id: number): void {
    if (this.state.tapes.some((t) => t.id === id)) this.set({ activeTape: id });
  }

  private patchTape(id: number, patch: Partial<TapeState>): void {
    this.set({
      tapes: this.state.tapes.map((t) => (t.id === id ? { ...t, ...patch } : t)),
    });
  }

  private tape(id: number): TapeState | undefined {
    return this.state.tapes.find((t) => t.id === id);
  }

  beginTapeEdit(id: number): void {
    const tape = this.tape(id);
    if (tape && tape.draft === null) this.patchTape(id, { draft: [...tape.symbols] });
  }

  appendSymbol(id: number, symbol: string): void {
    const tape = this.tape(id);
    if (tape?.draft) this.patchTape(id, { draft: [...tape.draft, symbol] });
  }

  /** Del removes the rightmost symbol of the draft. */
  deleteSymbol(id: number): void {
    const tape = this.tape(id);
    if (tape?.draft && tape.draft.length > 0) {
      this.patchTape(id, { draft: tape.draft.slice(0, -1) });
    }
  }

  /** Enter commits the draft; the ticker resets and the run is re-fetched. */
  async commitTape(id: number): Promise<void> {
    const tape = this.tape(id);
    if (!tape || tape.draft === null) return;
    this.patchTape(id, { symbols: tape.draft, draft: null, ticker: 0, result: null });
    const expected = this.generation;
    const outcome = await this.api.run(this.state.machineId, tape.draft, this.state.kind);
    if (this.generation !== expected) return;
    if ("accepted" in outcome) {
      this.patchTape(id, { result: { accepted: outcome.accepted, trace: outcome.trace } });
    } else {
      this.set({ lastValidationError: outcome.error });
    }
  }

  /** Each call yields freshly generated node identifiers server-side. */
  exportNow(): Promise<{ source: string; nodeNames: Record<string, string> }> {
    return this.api.exportTikz(this.state.machineId);
  }

  advance(id: number): void {
    const tape = this.tape(id);
    if (tape) this.patchTape(id, { ticker: Math.min(tape.ticker + 1, tape.symbols.length) });
  }

  rewind(id: number): void {
    const tape = this.tape(id);
    if (tape) this.patchTape(id, { ticker: Math.max(tape.ticker - 1, 0) });
  }

  /** The active state set at the tape's current ticker, sliced locally. */
  activeStates(id: number): number[] {
    const tape = this.tape(id);
    if (!tape?.result) return [];
    return tape.result.trace[tape.ticker] ?? [];
  }
}
