// UI-side session state: the buffer mirror and everything the pane renders.
//
// The mirror is only ever changed by applying acknowledged responses (or
// the user's own typing, which is immediately reported to the engine), so
// after every acknowledged op it is byte-identical to the engine buffer.
// The UI holds no syntax knowledge: the highlight is whatever region the
// engine last reported, never something computed client-side.

import { applyEdits, EngineRequest, EngineResponse } from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface HistoryEntry {
  op: string;
  cursor?: number;
  outcome: string; // "ok" or an error code
}

export interface UiState {
  text: string;
  cursor: number;
  highlight: [number, number] | null;
  version: number;
  status: ConnectionStatus;
  pendingId: number | null;
  history: HistoryEntry[];
  toast: string | null;
}

export function initialState(text: string): UiState {
  return {
    text,
    cursor: 0,
    highlight: null,
    version: 0,
    status: "connecting",
    pendingId: null,
    history: [],
    toast: null,
  };
}

export interface Applied {
  state: UiState;
  /** The engine rejected our version: the mirror must be re-established
   *  as a fresh buffer (full-text resync via open). */
  resync: boolean;
}

export function applyResponse(
  state: UiState,
  request: EngineRequest,
  response: EngineResponse,
): Applied {
  const entry: HistoryEntry = {
    op: request.op,
    cursor: request.cursor,
    outcome: response.ok ? "ok" : response.code,
  };
  const history = [...state.history, entry];

  if (!response.ok) {
    return {
      state: { ...state, history, pendingId: null, toast: response.code },
      resync: response.code === "STALE_VERSION",
    };
  }

  const text = response.edits.length > 0 ? applyEdits(state.text, response.edits) : state.text;
  // A reported selection wins; otherwise a text change makes any old
  // highlight meaningless (regions are pre-edit), navigation keeps it.
  const highlight =
    response.selection ?? (response.edits.length > 0 ? null : state.highlight);
  return {
    state: {
      ...state,
      text,
      cursor: response.cursor,
      highlight,
      version: response.version,
      pendingId: null,
      history,
      toast: null,
    },
    resync: false,
  };
}

/** The user edited the pane directly; the engine will be told separately. */
export function localEdit(state: UiState, text: string, cursor: number): UiState {
  return { ...state, text, cursor, highlight: null };
}

export function moveCursor(state: UiState, cursor: number): UiState {
  return { ...state, cursor };
}
