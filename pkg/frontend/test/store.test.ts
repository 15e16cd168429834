import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import type { FetchLike } from "../src/api";
import { EditorStore } from "../src/store";
import type { MachineDocument, ValidationError } from "../src/types";
import { emptyDocument } from "../src/types";

/**
 * In-memory stand-in for the machine service.  Semantics are canned, not
 * computed: the store under test must treat whatever this returns as the
 * truth, which is exactly the property we want to exercise.
 */
class FakeService {
  doc: MachineDocument = emptyDocument("M");
  putBodies: MachineDocument[] = [];
  putDelayMs = 0;
  failNextPut: string | null = null;
  validationError: ValidationError | null = null;
  runOutcome: unknown = { accepted: true, trace: [[0]] };
  runTapes: string[][] = [];

  readonly fetcher: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^http:\/\/[^/]+/, "");
    const json = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), { status });

    if (method === "PUT" && path.startsWith("/machines/")) {
      if (this.putDelayMs > 0) {
        await new Promise((resolve) => setTimeout(resolve, this.putDelayMs));
      }
      if (this.failNextPut) {
        const message = this.failNextPut;
        this.failNextPut = null;
        return json(422, { httpStatus: 422, code: "INVARIANT_ERROR", message });
      }
      this.doc = JSON.parse(init!.body as string) as MachineDocument;
      this.putBodies.push(this.doc);
      return json(200, { id: "m1" });
    }
    if (method === "POST" && path.includes("/validate")) {
      return json(
        200,
        this.validationError ? { ok: false, error: this.validationError } : { ok: true },
      );
    }
    if (method === "POST" && path.endsWith("/run")) {
      const body = JSON.parse(init!.body as string) as { tape: string[] };
      this.runTapes.push(body.tape);
      return json(200, this.runOutcome);
    }
    if (path.endsWith("/definition")) return json(200, { text: "M = (Q, Σ, Δ, S, F)" });
    if (path.endsWith("/alphabet")) {
      return json(200, { alphabet: ["0", "1"], keyMapping: { a: "0", s: "1" } });
    }
    if (path.endsWith("/export/tikz")) {
      return json(200, { source: "\\begin{tikzpicture}\n\\end{tikzpicture}\n", nodeNames: {} });
    }
    throw new Error(`fake service has no route for ${method} ${path}`);
  };
}

function makeStore(service: FakeService): EditorStore {
  const api = new ApiClient("http://fake", service.fetcher);
  return new EditorStore(api, "m1", service.doc);
}

describe("optimistic document sync", () => {
  it("edits land on the mirror immediately and reach the server", async () => {
    const service = new FakeService();
    const store = makeStore(service);
    store.createState(1, 2);
    expect(store.getState().doc.states.length).toBe(1);
    await store.settled();
    expect(service.doc.states.length).toBe(1);
    expect(service.doc).toEqual(store.getState().doc);
  });

  it("a failed PUT rolls the mirror back and surfaces the message", async () => {
    const service = new FakeService();
    const store = makeStore(service);
    store.createState(0, 0);
    await store.settled();
    const acked = store.getState().doc;

    service.failNextPut = "state display names must be unique";
    store.renameState(store.getState().doc.states[0]!.id, "q_0");
    await store.settled();
    expect(store.getState().doc).toEqual(acked);
    expect(store.getState().editError).toContain("unique");
  });

  it("a burst of edits coalesces into at most two PUTs", async () => {
    const service = new FakeService();
    service.putDelayMs = 10;
    const store = makeStore(service);
    for (let i = 0; i < 6; i++) store.createState(i, 0);
    await store.settled();
    expect(service.putBodies.length).toBeLessThanOrEqual(2);
    const last = service.putBodies[service.putBodies.length - 1]!;
    expect(last.states.length).toBe(6);
    expect(service.doc).toEqual(store.getState().doc);
  });

  it("ids of deleted states are not handed out again", async () => {
    const service = new FakeService();
    const store = makeStore(service);
    const a = store.createState(0, 0);
    const b = store.createState(1, 0);
    store.deleteState(b);
    const c = store.createState(2, 0);
    expect(c).toBeGreaterThan(b);
    expect(new Set([a, b, c]).size).toBe(3);
    await store.settled();
  });

  it("arrow drags released over empty canvas create nothing", async () => {
    const service = new FakeService();
    const store = makeStore(service);
    const a = store.createState(0, 0);
    store.beginArrow(a);
    expect(store.getState().pendingArrow).toBe(a);
    store.endArrow(null);
    expect(store.getState().pendingArrow).toBeNull();
    await store.settled();
    expect(service.doc.transitions).toEqual([]);
  });

  it("an empty label is rejected locally with an inline message", async () => {
    const service = new FakeService();
    const store = makeStore(service);
    const a = store.createState(0, 0);
    expect(store.createTransition(a, a, "  ")).toBeNull();
    expect(store.getState().editError).toContain("symbol");
    await store.settled();
    expect(service.doc.transitions).toEqual([]);
  });
});

describe("simulate mode", () => {
  it("commit fetches the run and slices the trace by ticker", async () => {
    const service = new FakeService();
    service.runOutcome = { accepted: true, trace: [[0, 1, 3], [1, 2], [1, 3]] };
    const store = makeStore(service);
    const tape = store.addTape();
    store.appendSymbol(tape, "0");
    store.appendSymbol(tape, "1");
    await store.commitTape(tape);

    expect(service.runTapes).toEqual([["0", "1"]]);
    expect(store.activeStates(tape)).toEqual([0, 1, 3]);
    store.advance(tape);
    expect(store.activeStates(tape)).toEqual([1, 2]);
    store.advance(tape);
    expect(store.activeStates(tape)).toEqual([1, 3]);
    store.advance(tape); // clamped at the end of the tape
    expect(store.activeStates(tape)).toEqual([1, 3]);
    store.rewind(tape);
    store.rewind(tape);
    store.rewind(tape); // clamped at zero
    expect(store.activeStates(tape)).toEqual([0, 1, 3]);
  });

  it("Del removes the rightmost draft symbol only", () => {
    const store = makeStore(new FakeService());
    const tape = store.addTape();
    store.appendSymbol(tape, "0");
    store.appendSymbol(tape, "1");
    store.deleteSymbol(tape);
    expect(store.getState().tapes[0]!.draft).toEqual(["0"]);
    store.deleteSymbol(tape);
    store.deleteSymbol(tape); // already empty; stays empty
    expect(store.getState().tapes[0]!.draft).toEqual([]);
  });

  it("re-editing a committed tape resets the ticker on commit", async () => {
    const service = new FakeService();
    service.runOutcome = { accepted: false, trace: [[0], [1]] };
    const store = makeStore(service);
    const tape = store.addTape();
    store.appendSymbol(tape, "0");
    await store.commitTape(tape);
    store.advance(tape);
    expect(store.getState().tapes[0]!.ticker).toBe(1);

    store.beginTapeEdit(tape);
    store.appendSymbol(tape, "1");
    await store.commitTape(tape);
    expect(store.getState().tapes[0]!.ticker).toBe(0);
    expect(store.getState().tapes[0]!.symbols).toEqual(["0", "1"]);
  });

  it("kind=dfa on an invalid machine surfaces the diagnostic, not a result", async () => {
    const service = new FakeService();
    const diagnostic = {
      code: "EPSILON_TRANSITION",
      state: 0,
      message: "epsilon transition at state q_0'",
    };
    service.validationError = diagnostic;
    service.runOutcome = { ok: false, error: diagnostic };
    const store = makeStore(service);
    const tape = store.addTape();
    await store.commitTape(tape);
    await store.setKind("dfa");

    expect(store.getState().kind).toBe("dfa");
    expect(store.getState().lastValidationError?.message).toBe(
      "epsilon transition at state q_0'",
    );
    expect(store.getState().tapes[0]!.result).toBeNull();
  });

  it("mode changes pull the definition text from the server", async () => {
    const store = makeStore(new FakeService());
    await store.setMode("simulate");
    expect(store.getState().definitionText).toBe("M = (Q, Σ, Δ, S, F)");
    expect(store.getState().alphabet?.keyMapping).toEqual({ a: "0", s: "1" });
  });

  it("deleting the active tape deactivates it", () => {
    const store = makeStore(new FakeService());
    const tape = store.addTape();
    expect(store.getState().activeTape).toBe(tape);
    store.deleteTape(tape);
    expect(store.getState().activeTape).toBeNull();
    expect(store.getState().tapes).toEqual([]);
  });
});
