// Node-side transport: one `structedit serve` subprocess per transport.

import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";
import { createInterface } from "node:readline";

import { Transport } from "./client.js";

export class StdioTransport implements Transport {
  private child: ChildProcessWithoutNullStreams;
  private lineHandlers: Array<(line: string) => void> = [];
  private closeHandlers: Array<() => void> = [];

  constructor(command = "structedit", args: string[] = ["serve"]) {
    this.child = spawn(command, args, { stdio: ["pipe", "pipe", "pipe"] });
    this.child.stderr.pipe(process.stderr);
    const lines = createInterface({ input: this.child.stdout });
    lines.on("line", (line) => {
      for (const handler of this.lineHandlers) handler(line);
    });
    this.child.on("exit", () => {
      for (const handler of this.closeHandlers) handler();
    });
  }

  send(line: string): void {
    this.child.stdin.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.child.stdin.end();
    this.child.kill();
  }
}
