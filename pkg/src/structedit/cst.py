"""Concrete syntax tree for the mini-ML language.

Every node carries the exact half-open region of source text it was read
from, so the tree plus the original string losslessly reproduce each
other.  Trivia (whitespace, keywords like ``->``/``with``/``in``/``=``,
comments) lives in the gaps between child regions inside the parent's
region; the delimiters that genuinely travel with a node are inside its
region (a branch's leading ``|``, a paren group's parens, a list's
brackets).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator

from .errors import DisorderedChildren, NoNodeAtCursor
from .textmodel import TextRegion, adjust_region, region_contains


class NodeKind(Enum):
    PROGRAM = "program"
    LET_BINDING = "let_binding"
    PATTERN = "pattern"
    PARAMETER = "parameter"
    MATCH_EXPR = "match_expr"
    BRANCH = "branch"
    FUN_EXPR = "fun_expr"
    IF_EXPR = "if_expr"
    APP_EXPR = "app_expr"
    BINOP_EXPR = "binop_expr"
    CONS_EXPR = "cons_expr"
    LIST_EXPR = "list_expr"
    PAREN_EXPR = "paren_expr"
    IDENT = "ident"
    INT_LIT = "int_lit"
    SEQUENCE = "sequence"


@dataclass(frozen=True, slots=True)
class CstNode:
    """One syntax node.

    ``label`` disambiguates nodes whose kind alone is not enough: the
    operator symbol for BINOP_EXPR, the token text for IDENT/INT_LIT, and
    the shape marker for PATTERN nodes ("::", "()", "[]", "_").

    SEQUENCE nodes keep their members flat in ``children``; ``item_index``
    marks the distinguished member and ``prefix_region`` optionally covers
    leading text (e.g. a match header) that belongs to no member.
    """

    kind: NodeKind
    region: TextRegion
    children: tuple[CstNode, ...] = ()
    label: str = ""
    recursive: bool = False
    prefix_region: TextRegion | None = None
    item_index: int = 0

    @property
    def sequence_before(self) -> tuple[CstNode, ...]:
        return self.children[: self.item_index]

    @property
    def sequence_item(self) -> CstNode:
        return self.children[self.item_index]

    @property
    def sequence_after(self) -> tuple[CstNode, ...]:
        return self.children[self.item_index + 1 :]

    def with_children(self, children: tuple[CstNode, ...]) -> CstNode:
        if self.kind is NodeKind.SEQUENCE and children:
            idx = min(self.item_index, len(children) - 1)
            return replace(self, children=children, item_index=idx)
        return replace(self, children=children)

    def __repr__(self) -> str:  # compact, for test failures
        tag = self.kind.value
        if self.label:
            tag += f":{self.label}"
        if self.recursive:
            tag += ":rec"
        inner = " " + " ".join(repr(c) for c in self.children) if self.children else ""
        return f"({tag}@{self.region.start}:{self.region.end}{inner})"


LEAF_KINDS = frozenset({NodeKind.IDENT, NodeKind.INT_LIT})

# Kinds whose region starts at their own leading token rather than at the
# first child, and likewise for trailing tokens.  Used when regions must be
# re-anchored after a child is removed.
OWN_START_KINDS = frozenset(
    {
        NodeKind.PROGRAM,
        NodeKind.LET_BINDING,
        NodeKind.MATCH_EXPR,
        NodeKind.BRANCH,
        NodeKind.FUN_EXPR,
        NodeKind.IF_EXPR,
        NodeKind.LIST_EXPR,
        NodeKind.PAREN_EXPR,
        NodeKind.PARAMETER,
        NodeKind.SEQUENCE,
    }
)
OWN_END_KINDS = frozenset(
    {
        NodeKind.PROGRAM,
        NodeKind.LIST_EXPR,
        NodeKind.PAREN_EXPR,
        NodeKind.PARAMETER,
        NodeKind.SEQUENCE,
    }
)


class ChildRole(Enum):
    """What position a child occupies inside its parent.

    Ident/IntLit read the same in binder, pattern, and expression
    positions, so operations that care (swapping, extraction) consult the
    role rather than the kind.
    """

    TOP_ITEM = "top_item"
    BINDER_NAME = "binder_name"
    PARAMETER = "parameter"
    PATTERN = "pattern"
    EXPRESSION = "expression"
    BRANCH = "branch"
    SEQUENCE_MEMBER = "sequence_member"


def child_role(parent: CstNode, index: int) -> ChildRole:
    kind = parent.kind
    child = parent.children[index]
    if kind is NodeKind.PROGRAM:
        return ChildRole.TOP_ITEM
    if kind is NodeKind.LET_BINDING:
        if index == 0:
            return ChildRole.BINDER_NAME
        if child.kind is NodeKind.PARAMETER:
            return ChildRole.PARAMETER
        return ChildRole.EXPRESSION
    if kind is NodeKind.MATCH_EXPR:
        return ChildRole.EXPRESSION if index == 0 else ChildRole.BRANCH
    if kind is NodeKind.BRANCH:
        return ChildRole.PATTERN if index == 0 else ChildRole.EXPRESSION
    if kind is NodeKind.FUN_EXPR:
        if child.kind is NodeKind.PARAMETER:
            return ChildRole.PARAMETER
        return ChildRole.EXPRESSION
    if kind in (NodeKind.PATTERN, NodeKind.PARAMETER):
        return ChildRole.PATTERN
    if kind is NodeKind.SEQUENCE:
        return ChildRole.SEQUENCE_MEMBER
    return ChildRole.EXPRESSION


def let_binding_parts(binding: CstNode) -> tuple[CstNode, tuple[CstNode, ...], CstNode, CstNode | None]:
    """Split a LET_BINDING's children into (name, params, value, body).

    ``body`` is None for top-level items; present for let-in expressions.
    Assumes the binding is shape-valid.
    """
    name = binding.children[0]
    params = tuple(c for c in binding.children[1:] if c.kind is NodeKind.PARAMETER)
    exprs = binding.children[1 + len(params) :]
    if len(exprs) == 2:
        return name, params, exprs[0], exprs[1]
    return name, params, exprs[0], None


def wrap_sequence(
    prefix_region: TextRegion | None,
    before: list[CstNode] | tuple[CstNode, ...],
    item: CstNode,
    after: list[CstNode] | tuple[CstNode, ...],
) -> CstNode:
    """Wrap ordered nodes into a Sequence whose region hulls its members.

    A given prefix_region extends the hull at either end, which lets a
    Sequence stand in for a construct whose leading text (e.g. ``match x
    with``) no longer has dedicated children.
    """
    members = (*before, item, *after)
    for a, b in zip(members, members[1:]):
        if a.region.end > b.region.start:
            raise DisorderedChildren(
                f"sequence members out of order: [{a.region.start},{a.region.end}) then "
                f"[{b.region.start},{b.region.end})"
            )
    start = members[0].region.start
    end = members[-1].region.end
    if prefix_region is not None:
        start = min(start, prefix_region.start)
        end = max(end, prefix_region.end)
    return CstNode(
        kind=NodeKind.SEQUENCE,
        region=TextRegion(start, end),
        children=members,
        prefix_region=prefix_region,
        item_index=len(before),
    )


def pick_child(node: CstNode, cursor: int) -> int | None:
    """Index of the child to descend into for ``cursor``, or None.

    Siblings are disjoint so at most one non-empty child contains the
    cursor; a child that *starts* at the cursor wins over one that merely
    ends there (which half-open containment already encodes).  Among
    degenerate empty regions at the same offset, prefer a non-empty child.
    """
    fallback = None
    for i, child in enumerate(node.children):
        if region_contains(child.region, cursor):
            if not child.region.is_empty:
                return i
            fallback = i if fallback is None else fallback
    return fallback


def node_at(root: CstNode, cursor: int) -> list[CstNode]:
    """Path from the root to the deepest node containing ``cursor``.

    The root alone never counts: a cursor sitting only in top-level trivia
    (or in an empty program) raises NoNodeAtCursor.
    """
    if not region_contains(root.region, cursor) and cursor != root.region.end:
        raise NoNodeAtCursor(f"cursor {cursor} outside buffer", position=cursor)
    path = [root]
    node = root
    while True:
        idx = pick_child(node, cursor)
        if idx is None:
            break
        node = node.children[idx]
        path.append(node)
    if len(path) == 1:
        raise NoNodeAtCursor(f"no node at cursor {cursor}", position=cursor)
    return path


def iter_nodes(root: CstNode) -> Iterator[CstNode]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def iter_nodes_with_role(root: CstNode) -> Iterator[tuple[CstNode, ChildRole | None, CstNode | None]]:
    """Yield (node, role-within-parent, parent); the root has role None."""
    stack: list[tuple[CstNode, ChildRole | None, CstNode | None]] = [(root, None, None)]
    while stack:
        node, role, parent = stack.pop()
        yield node, role, parent
        for i in reversed(range(len(node.children))):
            stack.append((node.children[i], child_role(node, i), node))


def translate(node: CstNode, delta: int) -> CstNode:
    """Shift every region in the subtree by ``delta``."""
    prefix = node.prefix_region.shift(delta) if node.prefix_region is not None else None
    return replace(
        node,
        region=node.region.shift(delta),
        prefix_region=prefix,
        children=tuple(translate(c, delta) for c in node.children),
    )


def adjust_node(node: CstNode, edit_start: int, removed_len: int, inserted_len: int) -> CstNode:
    """Map every region in the subtree through a range replacement."""
    prefix = (
        adjust_region(node.prefix_region, edit_start, removed_len, inserted_len)
        if node.prefix_region is not None
        else None
    )
    return replace(
        node,
        region=adjust_region(node.region, edit_start, removed_len, inserted_len),
        prefix_region=prefix,
        children=tuple(adjust_node(c, edit_start, removed_len, inserted_len) for c in node.children),
    )


def _unwrap_trivial_sequence(node: CstNode) -> CstNode:
    while (
        node.kind is NodeKind.SEQUENCE
        and len(node.children) == 1
        and node.prefix_region is None
    ):
        node = node.children[0]
    return node


def structural_equal(a: CstNode, b: CstNode, *, with_regions: bool = False) -> bool:
    """Structural equality; ignores regions unless ``with_regions``.

    A Sequence wrapping a single member with no prefix is transparent.
    """
    a = _unwrap_trivial_sequence(a)
    b = _unwrap_trivial_sequence(b)
    if a.kind is not b.kind or a.label != b.label or a.recursive != b.recursive:
        return False
    if a.kind is NodeKind.SEQUENCE and a.item_index != b.item_index:
        return False
    if with_regions and a.region != b.region:
        return False
    if with_regions and a.prefix_region != b.prefix_region:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(
        structural_equal(ca, cb, with_regions=with_regions)
        for ca, cb in zip(a.children, b.children)
    )


def check_node_invariants(root: CstNode, text: str | None = None) -> None:
    """Raise ValueError if region bookkeeping is inconsistent.

    Checks containment of children, ascending disjoint siblings, childless
    leaves, and (when the source text is supplied) that regions fit the
    buffer and each branch region starts at its ``|``.
    """
    if text is not None and root.region.end > len(text):
        raise ValueError(f"region [{root.region.start},{root.region.end}) exceeds buffer length {len(text)}")
    for node in iter_nodes(root):
        if node.kind in LEAF_KINDS and node.children:
            raise ValueError(f"leaf {node.kind.value} has children")
        if text is not None and node.kind is NodeKind.BRANCH:
            if node.region.start >= len(text) or text[node.region.start] != "|":
                raise ValueError(f"branch region [{node.region.start},{node.region.end}) does not start at '|'")
        prev_end = None
        for child in node.children:
            if not node.region.contains_region(child.region):
                raise ValueError(
                    f"child [{child.region.start},{child.region.end}) escapes parent "
                    f"[{node.region.start},{node.region.end})"
                )
            if prev_end is not None and child.region.start < prev_end:
                raise ValueError(f"siblings overlap or are out of order at offset {child.region.start}")
            prev_end = child.region.end
        if node.prefix_region is not None and not node.region.contains_region(node.prefix_region):
            raise ValueError("sequence prefix escapes its region")


_EXPRESSION_KINDS = frozenset(
    {
        NodeKind.MATCH_EXPR,
        NodeKind.FUN_EXPR,
        NodeKind.IF_EXPR,
        NodeKind.APP_EXPR,
        NodeKind.BINOP_EXPR,
        NodeKind.CONS_EXPR,
        NodeKind.LIST_EXPR,
        NodeKind.PAREN_EXPR,
        NodeKind.IDENT,
        NodeKind.INT_LIT,
    }
)


def is_expression_like(node: CstNode) -> bool:
    return node.kind in _EXPRESSION_KINDS or node.kind is NodeKind.LET_BINDING


def _shape_ok(node: CstNode, role: ChildRole | None) -> bool:
    k = node.kind
    ch = node.children
    if k is NodeKind.SEQUENCE:
        return False
    if k is NodeKind.PROGRAM:
        return all(c.kind is NodeKind.LET_BINDING for c in ch)
    if k is NodeKind.LET_BINDING:
        if len(ch) < 2 or ch[0].kind is not NodeKind.IDENT:
            return False
        i = 1
        while i < len(ch) and ch[i].kind is NodeKind.PARAMETER:
            i += 1
        exprs = ch[i:]
        if not 1 <= len(exprs) <= 2:
            return False
        return all(is_expression_like(e) for e in exprs)
    if k is NodeKind.MATCH_EXPR:
        return (
            len(ch) >= 2
            and is_expression_like(ch[0])
            and all(c.kind is NodeKind.BRANCH for c in ch[1:])
        )
    if k is NodeKind.BRANCH:
        return len(ch) == 2
    if k is NodeKind.FUN_EXPR:
        return (
            len(ch) >= 2
            and all(c.kind is NodeKind.PARAMETER for c in ch[:-1])
            and is_expression_like(ch[-1])
        )
    if k is NodeKind.IF_EXPR:
        return len(ch) == 3
    if k is NodeKind.APP_EXPR:
        return len(ch) >= 2
    if k in (NodeKind.BINOP_EXPR, NodeKind.CONS_EXPR):
        return len(ch) == 2
    if k is NodeKind.PAREN_EXPR:
        return len(ch) == 1
    if k is NodeKind.PARAMETER:
        return len(ch) == 1
    if k in LEAF_KINDS:
        return not ch
    return True  # LIST_EXPR (any arity), PATTERN


def node_shape_ok(node: CstNode) -> bool:
    """Arity/kind constraints for a single node, ignoring the subtree."""
    return _shape_ok(node, None)


def tree_shape_valid(root: CstNode) -> bool:
    """False when the tree contains a Sequence or a node missing a
    mandatory component — the documented invalid intermediate states that
    structural deletion can produce."""
    return all(_shape_ok(node, role) for node, role, _ in iter_nodes_with_role(root))
