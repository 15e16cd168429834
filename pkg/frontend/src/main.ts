/**
 * Application wiring: pick a machine, build the store, connect canvas,
 * panels and the keyboard.
 *
 * The API base defaults to the server's default port on the same host and
 * can be overridden with ?api=http://host:port or localStorage "finsm-api".
 */

import { ApiClient, ApiError } from "./api";
import { CanvasView } from "./canvas";
import { formatLabel, transitionById } from "./document";
import { interpretKey } from "./keyboard";
import { Panels } from "./panels";
import { EditorStore } from "./store";
import { emptyDocument } from "./types";

function apiBase(): string {
  const fromQuery = new URLSearchParams(location.search).get("api");
  if (fromQuery) return fromQuery;
  return localStorage.getItem("finsm-api") ?? `http://${location.hostname}:8040`;
}

async function pickMachine(api: ApiClient): Promise<string> {
  const fromQuery = new URLSearchParams(location.search).get("machine");
  if (fromQuery) return fromQuery;
  const existing = await api.listMachines();
  if (existing.length > 0) return existing[0]!.id;
  const created = await api.createMachine(emptyDocument("Untitled"));
  return created.id;
}

async function boot(): Promise<void> {
  const api = new ApiClient(apiBase());
  const machineId = await pickMachine(api);
  const doc = await api.getMachine(machineId);
  const store = new EditorStore(api, machineId, doc);

  const canvasEl = document.getElementById("canvas") as HTMLCanvasElement;
  const sidebar = document.getElementById("sidebar") as HTMLElement;
  const nameInput = document.getElementById("machine-name") as HTMLInputElement;
  const snapToggle = document.getElementById("grid-snap") as HTMLInputElement;
  const floatInput = document.getElementById("float-input") as HTMLInputElement;
  const tabs = Array.from(document.querySelectorAll<HTMLButtonElement>(".tabs button"));

  function fitCanvas(): void {
    canvasEl.width = canvasEl.clientWidth;
    canvasEl.height = canvasEl.clientHeight;
  }
  window.addEventListener("resize", () => {
    fitCanvas();
    canvas.render();
  });

  // One floating text box serves both label prompts and label edits.
  let floatCommit: ((text: string) => void) | null = null;
  let floatCancel: (() => void) | null = null;
  function openFloatInput(text: string, commit: (text: string) => void, cancel?: () => void): void {
    floatCommit = commit;
    floatCancel = cancel ?? null;
    floatInput.value = text;
    floatInput.style.display = "block";
    floatInput.style.left = "50%";
    floatInput.style.top = "3.2rem";
    floatInput.focus();
    floatInput.select();
  }
  function closeFloatInput(): void {
    floatInput.style.display = "none";
    floatCommit = null;
    floatCancel = null;
  }
  floatInput.addEventListener("keydown", (e) => {
    if (e.key === "Enter") {
      const commit = floatCommit;
      closeFloatInput();
      commit?.(floatInput.value);
    } else if (e.key === "Escape") {
      const cancel = floatCancel;
      closeFloatInput();
      cancel?.();
    }
    e.stopPropagation();
  });

  const canvas = new CanvasView(canvasEl, {
    doc: () => store.getState().doc,
    activeStates: () => {
      const s = store.getState();
      if (s.mode !== "simulate" || s.activeTape === null) return [];
      return store.activeStates(s.activeTape);
    },
    pendingArrow: () => store.getState().pendingArrow,
    selection: () => store.getState().selection,
    errorState: () => {
      const err = store.getState().lastValidationError;
      return err && err.state !== undefined && store.getState().mode === "simulate"
        ? err.state
        : null;
    },
    buildMode: () => store.getState().mode === "build",
    gridSnap: () => snapToggle.checked,
    createState: (x, y) => void store.createState(x, y),
    moveState: (id, x, y) => store.moveState(id, x, y),
    beginArrow: (source) => store.beginArrow(source),
    endArrow: (target) => {
      if (target === null) {
        store.endArrow(null);
        return;
      }
      openFloatInput(
        "",
        (text) => store.endArrow(target, text),
        () => store.endArrow(null),
      );
    },
    editLabel: (id) => {
      const t = transitionById(store.getState().doc, id);
      if (!t) return;
      openFloatInput(formatLabel(t.symbols), (text) => store.relabelTransition(id, text));
    },
    select: (sel) =>
      store.select(
        sel.kind === "none" ? { kind: "none" } : { kind: sel.kind, id: sel.id! },
      ),
    toggleFinal: (id) => store.toggleFinal(id),
  });

  const panels = new Panels(sidebar, store);

  for (const tab of tabs) {
    tab.addEventListener("click", () => void store.setMode(tab.dataset.mode as never));
  }

  nameInput.addEventListener("change", () => store.setMachineName(nameInput.value));

  document.addEventListener("keydown", (e) => {
    if (document.activeElement instanceof HTMLInputElement) return;
    if (document.activeElement instanceof HTMLSelectElement) return;
    const state = store.getState();

    if (state.mode === "build") {
      const sel = state.selection;
      if (sel.kind === "state") {
        if (e.key === "s" || e.key === "S") store.toggleStart(sel.id);
        if (e.key === "f" || e.key === "F") store.toggleFinal(sel.id);
        if (e.key === "Delete") store.deleteState(sel.id);
      } else if (sel.kind === "transition" && e.key === "Delete") {
        store.deleteTransition(sel.id);
      }
      return;
    }

    if (state.mode !== "simulate" || state.activeTape === null) return;
    const tape = state.tapes.find((t) => t.id === state.activeTape);
    if (!tape) return;
    const action = interpretKey(e.key, {
      editing: tape.draft !== null,
      keyMapping: state.alphabet?.keyMapping ?? {},
    });
    switch (action.type) {
      case "append":
        store.appendSymbol(tape.id, action.symbol);
        break;
      case "deleteSymbol":
        store.deleteSymbol(tape.id);
        break;
      case "commit":
        void store.commitTape(tape.id);
        break;
      case "advance":
        store.advance(tape.id);
        e.preventDefault();
        break;
      case "rewind":
        store.rewind(tape.id);
        e.preventDefault();
        break;
      case "none":
        break;
    }
  });

  store.subscribe(() => {
    const state = store.getState();
    if (document.activeElement !== nameInput) nameInput.value = state.doc.name;
    for (const tab of tabs) tab.classList.toggle("current", tab.dataset.mode === state.mode);
    panels.update();
    canvas.render();
  });

  fitCanvas();
  nameInput.value = doc.name;
  panels.update();
  canvas.render();
}

boot().catch((err) => {
  const sidebar = document.getElementById("sidebar");
  if (sidebar) {
    sidebar.textContent =
      err instanceof ApiError
        ? `server error: ${err.message}`
        : `cannot reach the machine service (${String(err)}); is it running? ` +
          `Point this page at it with ?api=http://host:port`;
  }
});
