// Engine client: newline-delimited JSON over a pluggable transport, with
// the per-buffer serialization the engine's concurrency contract expects.

import { EngineRequest, EngineResponse, parseResponse } from "./protocol.js";

export interface Transport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

interface Pending {
  resolve: (response: EngineResponse) => void;
  reject: (error: Error) => void;
}

export class EngineClient {
  private nextId = 1;
  private pending = new Map<number, Pending>();
  private queues = new Map<string, Promise<unknown>>();
  private closed = false;

  constructor(private transport: Transport) {
    transport.onLine((line) => this.receive(line));
    transport.onClose(() => this.abortAll(new Error("engine connection closed")));
  }

  /**
   * Send one request; resolves with the engine's response (protocol
   * failures resolve too — only transport breakage rejects).  Requests
   * for the same buffer are queued so at most one is in flight.
   */
  request(message: Omit<EngineRequest, "id">): Promise<EngineResponse> {
    const run = () => this.post({ ...message, id: this.nextId++ });
    const tail = this.queues.get(message.buffer) ?? Promise.resolve();
    const turn = tail.then(run, run);
    this.queues.set(
      message.buffer,
      turn.catch(() => undefined),
    );
    return turn;
  }

  close(): void {
    this.closed = true;
    this.transport.close();
  }

  private post(message: EngineRequest): Promise<EngineResponse> {
    if (this.closed) return Promise.reject(new Error("client closed"));
    return new Promise((resolve, reject) => {
      this.pending.set(message.id, { resolve, reject });
      this.transport.send(JSON.stringify(message));
    });
  }

  private receive(line: string): void {
    if (!line.trim()) return;
    let response: EngineResponse;
    try {
      response = parseResponse(line);
    } catch {
      return; // not a response; nothing waits on it
    }
    if (response.id === null) return; // engine could not read our id
    const waiter = this.pending.get(response.id);
    if (!waiter) return;
    this.pending.delete(response.id);
    waiter.resolve(response);
  }

  private abortAll(error: Error): void {
    for (const waiter of this.pending.values()) waiter.reject(error);
    this.pending.clear();
  }
}
