/**
 * Simulate-mode key handling.
 *
 * The server assigns a letter key to each alphabet symbol (home row first);
 * while a tape is being edited those letters append their symbol, Delete or
 * Backspace removes the rightmost one and Enter commits.  Outside of an
 * edit, the arrow keys scrub the active tape.
 *
 * This module only decides *what* a keystroke means; the store applies it.
 */

export type KeyAction =
  | { type: "append"; symbol: string }
  | { type: "deleteSymbol" }
  | { type: "commit" }
  | { type: "advance" }
  | { type: "rewind" }
  | { type: "none" };

export function interpretKey(
  key: string,
  context: { editing: boolean; keyMapping: Record<string, string> },
): KeyAction {
  if (context.editing) {
    if (key === "Enter") return { type: "commit" };
    if (key === "Delete" || key === "Backspace") return { type: "deleteSymbol" };
    const symbol = context.keyMapping[key.toLowerCase()];
    if (symbol !== undefined && key.length === 1) return { type: "append", symbol };
    return { type: "none" };
  }
  if (key === "ArrowRight") return { type: "advance" };
  if (key === "ArrowLeft") return { type: "rewind" };
  return { type: "none" };
}
