/**
 * Sidebar and popup rendering.  Dumb DOM glue: everything shown here is
 * read straight out of the editor store; nothing is computed locally.
 */

import type { EditorStore, TapeState } from "./store";
import { EPSILON } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function pretty(symbol: string): string {
  return symbol === EPSILON ? "ε" : symbol;
}

export class Panels {
  constructor(
    private readonly root: HTMLElement,
    private readonly store: EditorStore,
  ) {}

  update(): void {
    const state = this.store.getState();
    this.root.replaceChildren();

    if (state.editError) {
      this.root.append(el("div", "panel error", state.editError));
    }

    if (state.mode === "simulate") {
      this.renderValidation();
      if (!state.lastValidationError || state.kind === "nfa") {
        this.renderTapes();
        this.renderDefinition();
      }
    } else if (state.mode === "export") {
      this.renderExport();
    } else {
      this.renderBuildHelp();
    }
  }

  private renderValidation(): void {
    const state = this.store.getState();
    const panel = el("div", "panel");
    const label = el("label", "", "treat as ");
    const select = el("select");
    for (const kind of ["nfa", "dfa"] as const) {
      const option = el("option", "", kind.toUpperCase());
      option.value = kind;
      option.selected = state.kind === kind;
      select.append(option);
    }
    select.addEventListener("change", () => {
      void this.store.setKind(select.value as "nfa" | "dfa");
    });
    label.append(select);
    panel.append(label);

    if (state.lastValidationError) {
      const err = state.lastValidationError;
      const box = el("div", "error validation", err.message);
      if (err.state !== undefined) {
        const target = state.doc.states.find((s) => s.id === err.state);
        if (target) box.append(el("div", "hint", `highlighted on the canvas: ${target.name}`));
      }
      panel.append(box);
    } else {
      panel.append(el("div", "ok", "machine is valid"));
    }
    this.root.append(panel);
  }

  private renderTapes(): void {
    const state = this.store.getState();
    const panel = el("div", "panel");
    panel.append(el("h3", "", "Tapes"));

    if (state.alphabet) {
      const keys = Object.entries(state.alphabet.keyMapping)
        .map(([key, symbol]) => `${key}→${pretty(symbol)}`)
        .join("  ");
      panel.append(el("div", "hint", `keys while editing: ${keys}; Del removes, Enter commits`));
    }

    for (const tape of state.tapes) {
      panel.append(this.renderTape(tape, tape.id === state.activeTape));
    }

    const add = el("button", "", "+ tape");
    add.addEventListener("click", () => {
      const id = this.store.addTape();
      this.store.beginTapeEdit(id);
    });
    panel.append(add);
    this.root.append(panel);
  }

  private renderTape(tape: TapeState, isActive: boolean): HTMLElement {
    const row = el("div", `tape${isActive ? " active" : ""}`);
    row.addEventListener("click", () => this.store.selectTape(tape.id));

    const symbols = tape.draft ?? tape.symbols;
    const cells = el("div", "cells");
    symbols.forEach((symbol, i) => {
      const cell = el("span", "cell", pretty(symbol));
      // The ticker sits between cells; everything already consumed is dim.
      if (tape.draft === null && i < tape.ticker) cell.classList.add("consumed");
      cells.append(cell);
    });
    if (symbols.length === 0) cells.append(el("span", "cell empty", "ε"));
    row.append(cells);

    if (tape.draft !== null) {
      row.append(el("span", "badge editing", "editing…"));
    } else if (tape.result) {
      row.append(
        el(
          "span",
          `badge ${tape.result.accepted ? "accept" : "reject"}`,
          tape.result.accepted ? "ACCEPT" : "REJECT",
        ),
      );
      row.append(el("span", "hint", ` step ${tape.ticker}/${tape.symbols.length}`));
    }

    const edit = el("button", "small", "edit");
    edit.addEventListener("click", (e) => {
      e.stopPropagation();
      this.store.selectTape(tape.id);
      this.store.beginTapeEdit(tape.id);
    });
    const drop = el("button", "small", "×");
    drop.addEventListener("click", (e) => {
      e.stopPropagation();
      this.store.deleteTape(tape.id);
    });
    row.append(edit, drop);
    return row;
  }

  private renderDefinition(): void {
    const text = this.store.getState().definitionText;
    if (!text) return;
    const panel = el("div", "panel");
    panel.append(el("h3", "", "Definition"));
    const pre = el("pre", "definition");
    pre.textContent = text;
    panel.append(pre);
    this.root.append(panel);
  }

  private renderExport(): void {
    const panel = el("div", "panel");
    panel.append(el("h3", "", "Export"));
    panel.append(
      el("div", "hint", "Generates TikZ for the current machine; node identifiers are fresh on every export."),
    );
    const button = el("button", "", "Export TikZ");
    const out = el("div");
    button.addEventListener("click", () => {
      void this.store.exportNow().then(
        (result) => {
          out.replaceChildren(this.exportPopup(result.source));
        },
        (err) => {
          out.replaceChildren(el("div", "error", String(err)));
        },
      );
    });
    panel.append(button, out);
    this.root.append(panel);
  }

  private exportPopup(source: string): HTMLElement {
    const popup = el("div", "popup");
    const pre = el("pre", "tikz");
    pre.textContent = source;
    const copy = el("button", "", "Copy to clipboard");
    copy.addEventListener("click", () => {
      void navigator.clipboard.writeText(source).then(() => {
        copy.textContent = "Copied";
      });
    });
    popup.append(copy, pre);
    return popup;
  }

  private renderBuildHelp(): void {
    const panel = el("div", "panel help");
    panel.append(el("h3", "", "Build mode"));
    const items = [
      "Shift+click empty canvas: new state",
      "drag a state's outer rim to another state: new transition (type the label, Enter)",
      "drag a state's middle: move it",
      "Shift+click a label: edit it (ε or eps for epsilon)",
      "double-click a state: toggle accepting",
      "with a state selected - S: toggle start, F: toggle accepting, Delete: remove",
      "with a label selected - Delete: remove the transition",
    ];
    const list = el("ul");
    for (const item of items) list.append(el("li", "", item));
    panel.append(list);
    this.root.append(panel);
  }
}
