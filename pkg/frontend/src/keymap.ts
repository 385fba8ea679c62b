// Default keybindings: Alt plus a mnemonic, one structural op each.

import { OpName } from "./protocol.js";

export interface KeyStroke {
  key: string;
  altKey: boolean;
  ctrlKey: boolean;
  metaKey: boolean;
}

const BINDINGS: Record<string, OpName> = {
  ArrowUp: "up",
  t: "transpose",
  d: "delete",
  s: "select",
  n: "next",
  p: "prev",
  e: "extract",
  b: "jump",
};

/** The op bound to a keystroke, or null for anything unbound. */
export function opForKey(stroke: KeyStroke): OpName | null {
  if (!stroke.altKey || stroke.ctrlKey || stroke.metaKey) return null;
  return BINDINGS[stroke.key.length === 1 ? stroke.key.toLowerCase() : stroke.key] ?? null;
}

export function describeBindings(): string[] {
  return Object.entries(BINDINGS).map(([key, op]) => `Alt+${key} — ${op}`);
}
