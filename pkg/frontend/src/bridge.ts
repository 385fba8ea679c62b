// Local bridge: serves the static playground page and relays protocol
// lines between each websocket client and its own `structedit serve`
// subprocess.  The protocol passes through untouched — the bridge knows
// nothing about its contents.

import { readFileSync } from "node:fs";
import { createServer } from "node:http";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { WebSocketServer, WebSocket } from "ws";

import { StdioTransport } from "./stdio.js";

const root = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

const PAGES: Record<string, { path: string; type: string }> = {
  "/": { path: "index.html", type: "text/html; charset=utf-8" },
  "/dist/src/browser.js": { path: "dist/src/browser.js", type: "text/javascript" },
};
for (const name of ["protocol", "uistate", "keymap", "client", "controller"]) {
  PAGES[`/dist/src/${name}.js`] = { path: `dist/src/${name}.js`, type: "text/javascript" };
}

export function startBridge(port: number, host = "127.0.0.1") {
  const server = createServer((request, response) => {
    const page = PAGES[request.url ?? ""];
    if (!page) {
      response.writeHead(404).end("not found");
      return;
    }
    try {
      const body = readFileSync(join(root, page.path));
      response.writeHead(200, { "content-type": page.type }).end(body);
    } catch {
      response.writeHead(404).end("not built — run `npm run build` first");
    }
  });

  const sockets = new WebSocketServer({ server, path: "/engine" });
  sockets.on("connection", (socket: WebSocket) => {
    const engine = new StdioTransport();
    engine.onLine((line) => {
      if (socket.readyState === WebSocket.OPEN) socket.send(line);
    });
    engine.onClose(() => socket.close());
    socket.on("message", (data) => engine.send(data.toString()));
    socket.on("close", () => engine.close());
  });

  server.listen(port, host, () => {
    console.log(`playground on http://${host}:${port}/ (engine relay at /engine)`);
  });
  return server;
}

if (process.argv[1] && import.meta.url === `file://${process.argv[1]}`) {
  startBridge(Number(process.env.PORT ?? 8520));
}
