"""Buffers, half-open character regions, and atomic edit transactions.

All offsets count Unicode scalar values (Python ``str`` indices), never
bytes.  A region ``[start, end)`` excludes ``end``; an empty region sits
*at* its start offset and still "contains" it, which keeps cursor logic
total at node boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OverlappingEdits, RangeOutOfBounds


@dataclass(frozen=True, slots=True)
class TextRegion:
    start: int
    end: int

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.end:
            raise ValueError(f"malformed region [{self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def is_empty(self) -> bool:
        return self.start == self.end

    def shift(self, delta: int) -> TextRegion:
        return TextRegion(self.start + delta, self.end + delta)

    def contains_offset(self, offset: int) -> bool:
        return region_contains(self, offset)

    def contains_region(self, other: TextRegion) -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: TextRegion) -> bool:
        return self.start < other.end and other.start < self.end

    def hull(self, other: TextRegion) -> TextRegion:
        return TextRegion(min(self.start, other.start), max(self.end, other.end))


def region_contains(region: TextRegion, offset: int) -> bool:
    """True when ``offset`` falls inside the region.

    Empty regions contain exactly their start offset.
    """
    if region.is_empty:
        return offset == region.start
    return region.start <= offset < region.end


def adjust_region(region: TextRegion, edit_start: int, removed_len: int, inserted_len: int) -> TextRegion:
    """Map a region through a single range replacement.

    Regions entirely after the edit shift by the net delta; regions before
    it are untouched; regions overlapping the removed span shrink by the
    intersection; regions containing the edit grow or shrink by the delta.
    Total: any region and any edit yield a well-formed region.
    """
    edit_end = edit_start + removed_len
    delta = inserted_len - removed_len

    def map_start(p: int) -> int:
        if p <= edit_start:
            return p
        if p >= edit_end:
            return p + delta
        return edit_start + inserted_len

    def map_end(p: int) -> int:
        if p <= edit_start:
            return p
        if p >= edit_end:
            return p + delta
        return edit_start

    start = map_start(region.start)
    end = max(start, map_end(region.end))
    return TextRegion(start, end)


@dataclass(frozen=True, slots=True)
class Edit:
    """Replace the text in ``region`` (pre-edit coordinates) with ``replacement``."""

    region: TextRegion
    replacement: str


@dataclass(frozen=True, slots=True)
class EditTransaction:
    """A set of non-overlapping edits applied atomically.

    All edit regions are expressed in pre-edit coordinates; ``cursor_after``
    is a post-edit offset.  Edits may touch at endpoints but never overlap.
    """

    edits: tuple[Edit, ...]
    cursor_after: int


@dataclass(frozen=True, slots=True)
class Buffer:
    id: str
    text: str
    version: int = 1


def apply_edits(text: str, edits: tuple[Edit, ...] | list[Edit]) -> str:
    """Apply simultaneous range replacements to ``text``.

    Equivalent to applying them one at a time in descending start order
    (ties keep list order, so equal-start insertions land right-to-left).
    """
    for edit in edits:
        if edit.region.end > len(text):
            raise RangeOutOfBounds(
                f"edit [{edit.region.start}, {edit.region.end}) exceeds buffer length {len(text)}",
                position=edit.region.end,
            )
    ordered = sorted(edits, key=lambda e: (e.region.start, e.region.end))
    for a, b in zip(ordered, ordered[1:]):
        if a.region.end > b.region.start:
            raise OverlappingEdits(
                f"edits [{a.region.start},{a.region.end}) and [{b.region.start},{b.region.end}) overlap"
            )
    out = text
    for edit in sorted(edits, key=lambda e: e.region.start, reverse=True):
        out = out[: edit.region.start] + edit.replacement + out[edit.region.end :]
    return out


def apply_transaction(buffer: Buffer, transaction: EditTransaction) -> Buffer:
    """Apply a transaction to a buffer, bumping its version by one."""
    new_text = apply_edits(buffer.text, transaction.edits)
    if not 0 <= transaction.cursor_after <= len(new_text):
        raise RangeOutOfBounds(
            f"cursor {transaction.cursor_after} outside post-edit buffer of length {len(new_text)}",
            position=transaction.cursor_after,
        )
    return Buffer(id=buffer.id, text=new_text, version=buffer.version + 1)
