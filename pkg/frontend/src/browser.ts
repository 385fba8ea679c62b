// Browser entry point: wires the DOM pane to the controller over a
// websocket to the local bridge.

import { EngineClient, Transport } from "./client.js";
import { PlaygroundController } from "./controller.js";
import { describeBindings, opForKey } from "./keymap.js";
import { cpIndex, cpLength } from "./protocol.js";
import { UiState } from "./uistate.js";

const STARTING_TEXT =
  "let rec map f xs = match xs with \n  | [] -> []\n  | x :: xs -> f x :: map f xs";

class WebSocketTransport implements Transport {
  private socket: WebSocket;
  private lineHandlers: Array<(line: string) => void> = [];
  private closeHandlers: Array<() => void> = [];
  private backlog: string[] = [];

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.addEventListener("open", () => {
      for (const line of this.backlog) this.socket.send(line);
      this.backlog = [];
    });
    this.socket.addEventListener("message", (event) => {
      for (const handler of this.lineHandlers) handler(String(event.data));
    });
    this.socket.addEventListener("close", () => {
      for (const handler of this.closeHandlers) handler();
    });
  }

  send(line: string): void {
    if (this.socket.readyState === WebSocket.OPEN) this.socket.send(line);
    else this.backlog.push(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.close();
  }
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function element<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function main(): void {
  const editor = element<HTMLTextAreaElement>("editor");
  const backdrop = element<HTMLElement>("backdrop");
  const status = element<HTMLElement>("status");
  const log = element<HTMLElement>("log");
  element<HTMLElement>("bindings").textContent = describeBindings().join("   ");

  const transport = new WebSocketTransport(`ws://${location.host}/engine`);
  const client = new EngineClient(transport);

  let applying = false;
  const render = (state: UiState) => {
    if (editor.value !== state.text) {
      applying = true;
      editor.value = state.text;
      applying = false;
    }
    const caret = cpIndex(state.text, Math.min(state.cursor, cpLength(state.text)));
    if (document.activeElement === editor && editor.selectionStart !== caret) {
      editor.setSelectionRange(caret, caret);
    }
    if (state.highlight) {
      const [from, to] = state.highlight;
      const a = cpIndex(state.text, Math.min(from, cpLength(state.text)));
      const b = cpIndex(state.text, Math.min(to, cpLength(state.text)));
      backdrop.innerHTML =
        escapeHtml(state.text.slice(0, a)) +
        "<mark>" +
        escapeHtml(state.text.slice(a, b)) +
        "</mark>" +
        escapeHtml(state.text.slice(b)) +
        "\n";
    } else {
      backdrop.textContent = state.text + "\n";
    }
    const toast = state.toast ? `   ⚠ ${state.toast}` : "";
    status.textContent = `${state.status} · v${state.version} · cursor ${state.cursor}${toast}`;
    log.textContent = state.history
      .slice(-8)
      .map((entry) => `${entry.op}@${entry.cursor ?? "-"} → ${entry.outcome}`)
      .join("\n");
  };

  const controller = new PlaygroundController(client, "playground", STARTING_TEXT, {
    promptName: () => window.prompt("name for the extracted binding"),
    onChange: render,
  });

  const cursorFromPane = () => cpLength(editor.value.slice(0, editor.selectionStart ?? 0));

  editor.addEventListener("keydown", (event) => {
    const op = opForKey(event);
    if (op === null) return;
    event.preventDefault();
    controller.cursorMoved(cursorFromPane());
    void controller.runOp(op);
  });
  editor.addEventListener("input", () => {
    if (!applying) void controller.paneEdited(editor.value, cursorFromPane());
  });
  for (const type of ["click", "keyup"]) {
    editor.addEventListener(type, () => controller.cursorMoved(cursorFromPane()));
  }

  render(controller.current);
  void controller.open();
}

document.addEventListener("DOMContentLoaded", main);
