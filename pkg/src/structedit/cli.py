"""Command-line entry points.

``structedit oneshot FILE --op NAME --cursor N`` runs one operation
against a file and prints the protocol response as a single JSON line;
``--apply`` also rewrites the file.  ``structedit serve`` speaks the
newline-delimited JSON protocol on stdio (or a unix socket) until end of
input.  Exit status: 0 on success, 1 when the operation failed, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .session import EditorService, handle_message, serve_socket, serve_stdio
from .textmodel import Edit, TextRegion, apply_edits

_OPS = (
    "up",
    "down",
    "next",
    "prev",
    "select",
    "transpose",
    "delete",
    "move",
    "extract",
    "jump",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="structedit",
        description="Structural editing engine for a mini-ML language.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    oneshot = sub.add_parser(
        "oneshot", help="run one operation against a file and print the response"
    )
    oneshot.add_argument("file", help="source file to operate on")
    oneshot.add_argument("--op", required=True, choices=_OPS, help="operation to run")
    oneshot.add_argument("--cursor", required=True, type=int, help="cursor offset")
    oneshot.add_argument("--name", help="introduced name (extract)")
    oneshot.add_argument(
        "--direction", choices=("forward", "backward"), help="direction (move)"
    )
    oneshot.add_argument(
        "--target", choices=("binding", "parameter"), help="jump target (jump)"
    )
    oneshot.add_argument(
        "--apply", action="store_true", help="write the edited file back in place"
    )

    serve = sub.add_parser("serve", help="speak the wire protocol")
    serve.add_argument("--socket", help="serve on this unix socket instead of stdio")
    return parser


def _oneshot(ns: argparse.Namespace) -> int:
    try:
        with open(ns.file, encoding="utf-8") as f:
            text = f.read()
    except OSError as err:
        print(f"structedit: cannot read {ns.file}: {err.strerror}", file=sys.stderr)
        return 2

    args: dict = {}
    if ns.name is not None:
        args["name"] = ns.name
    if ns.direction is not None:
        args["direction"] = ns.direction
    if ns.target is not None:
        args["target"] = ns.target

    service = EditorService()
    service.open_buffer("cli", text)
    response = handle_message(
        service,
        {"id": 1, "buffer": "cli", "op": ns.op, "cursor": ns.cursor, "args": args},
    )
    print(json.dumps(response))
    if not response.get("ok"):
        return 1
    if ns.apply and response["edits"]:
        edits = [
            Edit(TextRegion(e["start"], e["end"]), e["text"]) for e in response["edits"]
        ]
        with open(ns.file, "w", encoding="utf-8") as f:
            f.write(apply_edits(text, edits))
    return 0


def _serve(ns: argparse.Namespace) -> int:
    service = EditorService()
    try:
        if ns.socket:
            serve_socket(ns.socket, service)
        else:
            serve_stdio(service)
    except KeyboardInterrupt:
        pass
    return 0


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.mode == "oneshot":
        return _oneshot(ns)
    return _serve(ns)


if __name__ == "__main__":
    sys.exit(main())
