"""Error hierarchy shared by the engine, the session service, and the CLI.

Every error carries a stable machine-readable ``code`` so the wire protocol
and the CLI can report failures uniformly.  ``position`` is a character
offset where one makes sense (parse errors, out-of-range cursors).
"""

from __future__ import annotations


class StructuralEditError(Exception):
    code = "ERROR"

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.message = message
        self.position = position


class AtTop(StructuralEditError):
    code = "AT_TOP"


class NoChild(StructuralEditError):
    code = "NO_CHILD"


class NoSibling(StructuralEditError):
    code = "NO_SIBLING"


class NoNodeAtCursor(StructuralEditError):
    code = "NO_NODE_AT_CURSOR"


class KindMismatch(StructuralEditError):
    code = "KIND_MISMATCH"


class NotAnExpression(StructuralEditError):
    code = "NOT_AN_EXPRESSION"


class NameNotFresh(StructuralEditError):
    code = "NAME_NOT_FRESH"


class NoEnclosingBinding(StructuralEditError):
    code = "NO_ENCLOSING_BINDING"


class NoBindingFound(StructuralEditError):
    code = "NO_BINDING_FOUND"


class ParseError(StructuralEditError):
    code = "PARSE_ERROR"


class OverlappingEdits(StructuralEditError):
    code = "OVERLAPPING_EDITS"


class RangeOutOfBounds(StructuralEditError):
    code = "RANGE_OUT_OF_BOUNDS"


class DisorderedChildren(StructuralEditError):
    code = "DISORDERED_CHILDREN"


class StaleVersion(StructuralEditError):
    code = "STALE_VERSION"


class UnknownBuffer(StructuralEditError):
    code = "UNKNOWN_BUFFER"


class DuplicateBuffer(StructuralEditError):
    code = "DUPLICATE_BUFFER"


class BadRequest(StructuralEditError):
    code = "BAD_REQUEST"
