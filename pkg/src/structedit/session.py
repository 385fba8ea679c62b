"""Stateful façade over the engine: buffer registry, zipper cache, wire protocol.

One Session per open buffer.  The parsed tree and zipper are cached
between commands and reused by refocusing at the new cursor; any external
edit conservatively drops the cache.  After an operation whose buffer no
longer parses, the cached zipper is the only structural authority and
commands keep running against it — a fresh parse is only attempted once
the cache has been invalidated.

The wire protocol is newline-delimited JSON, one request per line:

    request:  {"id": 1, "buffer": "b", "op": "transpose", "cursor": 36,
               "version": 3, "args": {}}
    success:  {"id": 1, "ok": true, "edits": [{"start": .., "end": ..,
               "text": ".."}], "cursor": 67, "selection": [s, e], "version": 4}
    failure:  {"id": 1, "ok": false, "code": "NO_SIBLING", "message": "..",
               "position": 12}

``edits`` are pre-edit coordinates, non-overlapping, ascending, to be
applied as one atomic change.  ``op`` is one of up/down/next/prev/select/
transpose/delete/move/extract/jump, plus "open" (args: text) and "edit"
(args: start/end/text) for buffer management.  Offsets count Unicode
scalar values.  Commands for one buffer are processed strictly serially;
distinct buffers may be served concurrently.
"""

from __future__ import annotations

import json
import socketserver
import sys
import threading
from typing import IO, Callable

from .cst import CstNode
from .errors import (
    BadRequest,
    DuplicateBuffer,
    ParseError,
    StaleVersion,
    StructuralEditError,
    UnknownBuffer,
)
from .ops import (
    OpResult,
    extract_expression,
    jump_to,
    structural_delete,
    structural_down,
    structural_move,
    structural_next,
    structural_prev,
    structural_select,
    structural_transpose,
    structural_up,
)
from .parser import ParseDiagnostic, parse
from .textmodel import Buffer, Edit, TextRegion, apply_edits, apply_transaction
from .zipper import Zipper, refocus, unzip, zipper_at


class Session:
    """One open buffer plus its parse and zipper cache."""

    def __init__(self, buffer: Buffer):
        self.buffer = buffer
        self.tree: CstNode | None = None
        self.zipper: Zipper | None = None
        self.zipper_valid = False
        self.last_cursor = 0
        self.lock = threading.Lock()


def _run_simple(op: Callable[[Zipper], OpResult]):
    return lambda z, text, args: op(z)


def _run_with_text(op: Callable[[Zipper, str], OpResult]):
    return lambda z, text, args: op(z, text)


def _run_move(z: Zipper, text: str, args: dict) -> OpResult:
    return structural_move(z, text, args.get("direction", "forward"))


def _run_extract(z: Zipper, text: str, args: dict) -> OpResult:
    name = args.get("name")
    if not isinstance(name, str):
        raise BadRequest("extract requires args.name")
    return extract_expression(z, text, name)


def _run_jump(z: Zipper, text: str, args: dict) -> OpResult:
    return jump_to(z, args.get("target", "binding"))


_OPERATIONS: dict[str, Callable[[Zipper, str, dict], OpResult]] = {
    "up": _run_simple(structural_up),
    "down": _run_simple(structural_down),
    "next": _run_simple(structural_next),
    "prev": _run_simple(structural_prev),
    "select": _run_simple(structural_select),
    "transpose": _run_with_text(structural_transpose),
    "delete": _run_with_text(structural_delete),
    "move": _run_move,
    "extract": _run_extract,
    "jump": _run_jump,
}


class EditorService:
    """Buffer registry and command dispatcher.

    ``cache_enabled=False`` rebuilds the zipper from a fresh parse on
    every command; it exists so tests can check that caching is
    behaviorally invisible.
    """

    def __init__(self, cache_enabled: bool = True):
        self.cache_enabled = cache_enabled
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    def open_buffer(self, buffer_id: str, text: str) -> int:
        """Register a buffer.  Parsing waits for the first command."""
        with self._registry_lock:
            if buffer_id in self._sessions:
                raise DuplicateBuffer(f"buffer {buffer_id!r} is already open")
            self._sessions[buffer_id] = Session(Buffer(buffer_id, text, 1))
        return 1

    def _session(self, buffer_id: str) -> Session:
        with self._registry_lock:
            try:
                return self._sessions[buffer_id]
            except KeyError:
                raise UnknownBuffer(f"buffer {buffer_id!r} is not open") from None

    def notify_external_edit(self, buffer_id: str, edit: Edit) -> int:
        """Record an edit made outside the engine; drops the zipper cache."""
        session = self._session(buffer_id)
        with session.lock:
            text = apply_edits(session.buffer.text, (edit,))
            session.buffer = Buffer(buffer_id, text, session.buffer.version + 1)
            session.tree = None
            session.zipper = None
            session.zipper_valid = False
            return session.buffer.version

    def _focused_zipper(self, session: Session, cursor: int) -> Zipper:
        if self.cache_enabled and session.zipper_valid and session.zipper is not None:
            return refocus(session.zipper, cursor)
        tree = parse(session.buffer.text)
        if isinstance(tree, ParseDiagnostic):
            raise ParseError(tree.message, position=tree.position)
        session.tree = tree
        return zipper_at(tree, cursor)

    def dispatch(
        self,
        buffer_id: str,
        op: str,
        cursor: int | None = None,
        version: int | None = None,
        args: dict | None = None,
    ) -> dict:
        """Run one structural operation; returns the success payload."""
        runner = _OPERATIONS.get(op)
        if runner is None:
            raise BadRequest(f"unknown operation {op!r}")
        session = self._session(buffer_id)
        with session.lock:
            buffer = session.buffer
            if version is not None and version != buffer.version:
                raise StaleVersion(
                    f"buffer {buffer_id!r} is at version {buffer.version}, "
                    f"command expected {version}"
                )
            if not isinstance(cursor, int) or isinstance(cursor, bool):
                raise BadRequest("a cursor offset is required")
            if not 0 <= cursor <= len(buffer.text):
                raise BadRequest(
                    f"cursor {cursor} outside buffer of length {len(buffer.text)}",
                    position=cursor,
                )
            z = self._focused_zipper(session, cursor)
            result = runner(z, buffer.text, args or {})
            if result.transaction is not None:
                session.buffer = apply_transaction(buffer, result.transaction)
            session.zipper = result.zipper_after
            session.zipper_valid = True
            session.tree = unzip(result.zipper_after)
            session.last_cursor = result.cursor_after
            edits = []
            if result.transaction is not None:
                edits = sorted(result.transaction.edits, key=lambda e: e.region.start)
            payload = {
                "edits": [
                    {"start": e.region.start, "end": e.region.end, "text": e.replacement}
                    for e in edits
                ],
                "cursor": result.cursor_after,
                "version": session.buffer.version,
            }
            if result.selection is not None:
                payload["selection"] = [result.selection.start, result.selection.end]
            return payload


def handle_message(service: EditorService, message: object) -> dict:
    """Process one decoded protocol request, mapping failures onto codes."""
    msg_id = message.get("id") if isinstance(message, dict) else None
    try:
        if not isinstance(message, dict):
            raise BadRequest("request must be a JSON object")
        op = message.get("op")
        if not isinstance(op, str):
            raise BadRequest("request needs an \"op\" string")
        buffer_id = message.get("buffer")
        if not isinstance(buffer_id, str):
            raise BadRequest("request needs a \"buffer\" id")
        args = message.get("args") or {}
        if not isinstance(args, dict):
            raise BadRequest("\"args\" must be an object")
        version = message.get("version")
        if version is not None and (not isinstance(version, int) or isinstance(version, bool)):
            raise BadRequest("\"version\" must be an integer")

        if op == "open":
            text = args.get("text", "")
            if not isinstance(text, str):
                raise BadRequest("open requires args.text")
            new_version = service.open_buffer(buffer_id, text)
            payload = {"edits": [], "cursor": 0, "version": new_version}
        elif op == "edit":
            start, end = args.get("start"), args.get("end")
            text = args.get("text", "")
            if not (isinstance(start, int) and isinstance(end, int) and isinstance(text, str)):
                raise BadRequest("edit requires integer args.start/args.end and args.text")
            try:
                region = TextRegion(start, end)
            except ValueError as err:
                raise BadRequest(str(err)) from None
            new_version = service.notify_external_edit(buffer_id, Edit(region, text))
            payload = {"edits": [], "cursor": start + len(text), "version": new_version}
        else:
            payload = service.dispatch(
                buffer_id,
                op,
                cursor=message.get("cursor"),
                version=version,
                args=args,
            )
        return {"id": msg_id, "ok": True, **payload}
    except StructuralEditError as err:
        failure = {"id": msg_id, "ok": False, "code": err.code, "message": err.message}
        if err.position is not None:
            failure["position"] = err.position
        return failure


def serve_stdio(
    service: EditorService | None = None,
    instream: IO[str] | None = None,
    outstream: IO[str] | None = None,
) -> None:
    """Answer newline-delimited JSON requests until end of input."""
    service = service if service is not None else EditorService()
    instream = instream if instream is not None else sys.stdin
    outstream = outstream if outstream is not None else sys.stdout
    for line in instream:
        line = line.strip()
        if not line:
            continue
        try:
            message = json.loads(line)
        except json.JSONDecodeError as err:
            response: dict = {
                "id": None,
                "ok": False,
                "code": "BAD_REQUEST",
                "message": f"invalid JSON: {err.msg}",
            }
        else:
            response = handle_message(service, message)
        outstream.write(json.dumps(response) + "\n")
        outstream.flush()


def serve_socket(path: str, service: EditorService | None = None) -> None:
    """Serve the same protocol on a unix socket, one thread per client."""
    import io
    import os

    shared = service if service is not None else EditorService()
    if os.path.exists(path):
        os.unlink(path)

    class Handler(socketserver.StreamRequestHandler):
        def handle(self) -> None:
            reader = io.TextIOWrapper(self.rfile, encoding="utf-8")
            writer = io.TextIOWrapper(self.wfile, encoding="utf-8", line_buffering=True)
            serve_stdio(shared, reader, writer)

    with socketserver.ThreadingUnixStreamServer(path, Handler) as server:
        server.serve_forever()
