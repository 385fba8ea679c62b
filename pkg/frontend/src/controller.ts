// Ties keystrokes, the engine client, and the UI state together.
//
// Every acknowledged response is folded into the state; after any op
// that does not itself report a selection, a follow-up select at the new
// cursor fetches the focus bounds so the highlight always shows what the
// engine considers focused.  The pane is notified through a single
// onChange callback and needs no knowledge of the protocol.

import { EngineClient } from "./client.js";
import { cpLength, diffSpan, EngineResponse, OpName } from "./protocol.js";
import {
  applyResponse,
  initialState,
  localEdit,
  moveCursor,
  UiState,
} from "./uistate.js";

export interface ControllerOptions {
  /** Asked for the new binding's name when extract is invoked; returning
   *  null cancels the op (nothing is sent). */
  promptName?: () => string | null;
  onChange?: (state: UiState) => void;
}

export class PlaygroundController {
  private state: UiState;
  private generation = 0;

  constructor(
    private client: EngineClient,
    private baseBuffer: string,
    text: string,
    private options: ControllerOptions = {},
  ) {
    this.state = initialState(text);
  }

  get current(): UiState {
    return this.state;
  }

  private get buffer(): string {
    return this.generation === 0 ? this.baseBuffer : `${this.baseBuffer}~${this.generation}`;
  }

  private update(state: UiState): void {
    this.state = state;
    this.options.onChange?.(state);
  }

  async open(): Promise<void> {
    const response = await this.client.request({
      buffer: this.buffer,
      op: "open",
      args: { text: this.state.text },
    });
    if (!response.ok) throw new Error(`open failed: ${response.code}`);
    this.update({ ...this.state, version: response.version, status: "connected" });
  }

  cursorMoved(cursor: number): void {
    this.update(moveCursor(this.state, cursor));
  }

  /** One structural op at the current cursor, highlight refresh included. */
  async runOp(op: OpName): Promise<UiState> {
    const args: Record<string, unknown> = {};
    if (op === "extract") {
      const name = this.options.promptName?.() ?? null;
      if (name === null) return this.state;
      args.name = name;
    }
    if (op === "jump") args.target = "binding";

    const response = await this.request(op, this.state.cursor, args);
    if (response.ok && op !== "select") {
      await this.refreshHighlight();
    }
    return this.state;
  }

  /** The user typed in the pane: mirror first, then tell the engine. */
  async paneEdited(text: string, cursor: number): Promise<void> {
    const span = diffSpan(this.state.text, text);
    this.update(localEdit(this.state, text, cursor));
    if (span === null) return;
    const response = await this.client.request({
      buffer: this.buffer,
      op: "edit",
      version: this.state.version,
      args: { start: span.start, end: span.end, text: span.text },
    });
    const applied = applyResponse(this.state, { id: 0, buffer: this.buffer, op: "edit" }, response);
    // The mirror already contains the typing; only bookkeeping changes.
    this.update({ ...applied.state, text: this.state.text, cursor });
    if (applied.resync) await this.resync();
  }

  private async request(
    op: OpName,
    cursor: number,
    args: Record<string, unknown>,
  ): Promise<EngineResponse> {
    const message = { buffer: this.buffer, op, cursor, version: this.state.version, args };
    this.update({ ...this.state, pendingId: 1 });
    const response = await this.client.request(message);
    const applied = applyResponse(this.state, { ...message, id: 0 }, response);
    this.update(applied.state);
    if (applied.resync) await this.resync();
    return response;
  }

  private async refreshHighlight(): Promise<void> {
    const cursor = this.state.cursor;
    if (cursor > cpLength(this.state.text)) return;
    const response = await this.client.request({
      buffer: this.buffer,
      op: "select",
      cursor,
      version: this.state.version,
    });
    if (response.ok && response.selection) {
      this.update({ ...this.state, highlight: response.selection });
    }
  }

  /**
   * The engine and the pane disagree on versions.  The pane is the
   * editor, so its text wins: re-establish it as a fresh buffer and
   * carry on from there.
   */
  private async resync(): Promise<void> {
    this.generation++;
    const response = await this.client.request({
      buffer: this.buffer,
      op: "open",
      args: { text: this.state.text },
    });
    if (response.ok) {
      this.update({ ...this.state, version: response.version, toast: null });
    }
  }
}
