"""Bounds-tracking zipper over the concrete syntax tree.

A zipper is either ``Top`` (the whole tree in view, nothing focused) or a
``Node`` focused on one subtree.  A ``Node`` keeps the focused item, its
preceding siblings (``below``, nearest first), its following siblings
(``above``, nearest first), and the parent context, so sibling moves are
O(1) and going up reinstalls the focus among the parent's children.

``bounds`` always equals the focused item's region; construction refuses
anything else, so the invariant cannot silently rot.  Everything here is
immutable: navigation returns fresh zippers and never touches the tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cst import CstNode, pick_child
from .errors import AtTop, NoChild, NoNodeAtCursor, NoSibling
from .textmodel import TextRegion, region_contains


@dataclass(frozen=True, slots=True)
class Top:
    root: CstNode


@dataclass(frozen=True, slots=True)
class Node:
    item: CstNode
    below: tuple[CstNode, ...]
    above: tuple[CstNode, ...]
    parent: Zipper
    bounds: TextRegion

    def __post_init__(self) -> None:
        if self.bounds != self.item.region:
            raise ValueError(
                f"zipper bounds [{self.bounds.start},{self.bounds.end}) diverged from "
                f"item region [{self.item.region.start},{self.item.region.end})"
            )

    @staticmethod
    def make(
        item: CstNode,
        below: tuple[CstNode, ...],
        above: tuple[CstNode, ...],
        parent: Zipper,
    ) -> Node:
        return Node(item, below, above, parent, item.region)


Zipper = Top | Node


def focus_item(z: Zipper) -> CstNode:
    return z.root if isinstance(z, Top) else z.item


def focus_region(z: Zipper) -> TextRegion:
    return z.root.region if isinstance(z, Top) else z.bounds


def parent_item(z: Node) -> CstNode:
    return z.parent.root if isinstance(z.parent, Top) else z.parent.item


def descend(z: Zipper, index: int) -> Node:
    """Focus child ``index`` of the current focus (or of the root at Top)."""
    node = focus_item(z)
    if not 0 <= index < len(node.children):
        raise NoChild(f"no child at index {index}")
    return Node.make(
        node.children[index],
        tuple(reversed(node.children[:index])),
        node.children[index + 1 :],
        z,
    )


def go_down(z: Zipper) -> Node:
    if not focus_item(z).children:
        raise NoChild("the focused node has no children")
    return descend(z, 0)


def go_up(z: Zipper) -> Zipper:
    """Reinstall the focus among its siblings and focus the parent."""
    if isinstance(z, Top):
        raise AtTop("already at the top of the tree")
    children = (*reversed(z.below), z.item, *z.above)
    p = z.parent
    if isinstance(p, Top):
        return Top(p.root.with_children(children))
    return Node.make(p.item.with_children(children), p.below, p.above, p.parent)


def go_next(z: Zipper) -> Node:
    if isinstance(z, Top) or not z.above:
        raise NoSibling("no following sibling")
    return Node.make(z.above[0], (z.item, *z.below), z.above[1:], z.parent)


def go_prev(z: Zipper) -> Node:
    if isinstance(z, Top) or not z.below:
        raise NoSibling("no preceding sibling")
    return Node.make(z.below[0], z.below[1:], (z.item, *z.above), z.parent)


def unzip(z: Zipper) -> CstNode:
    while isinstance(z, Node):
        z = go_up(z)
    return z.root


def refocus(z: Zipper, cursor: int) -> Node:
    """Move an existing zipper to the deepest node containing ``cursor``.

    Ascends until the focus bounds contain the cursor (to Top at worst),
    then descends by the same child-picking rule node_at uses.  Starting
    from Top this *is* zipper construction, so a refocused cached zipper
    can never disagree with a freshly built one.
    """
    while isinstance(z, Node) and not region_contains(z.bounds, cursor):
        z = go_up(z)
    if isinstance(z, Top):
        root = z.root
        if not region_contains(root.region, cursor) and cursor != root.region.end:
            raise NoNodeAtCursor(f"cursor {cursor} outside buffer", position=cursor)
    node = focus_item(z)
    while True:
        idx = pick_child(node, cursor)
        if idx is None:
            break
        z = descend(z, idx)
        node = node.children[idx]
    if isinstance(z, Top):
        raise NoNodeAtCursor(f"no node at cursor {cursor}", position=cursor)
    return z


def zipper_at(root: CstNode, cursor: int) -> Node:
    """Zipper focused on the deepest node containing ``cursor``."""
    return refocus(Top(root), cursor)


def path_indices(z: Zipper) -> list[int]:
    """Child indices leading from the root down to the focus."""
    indices: list[int] = []
    while isinstance(z, Node):
        indices.append(len(z.below))
        z = z.parent
    indices.reverse()
    return indices


def descend_path(root: CstNode, indices: list[int] | tuple[int, ...]) -> Zipper:
    z: Zipper = Top(root)
    for index in indices:
        z = descend(z, index)
    return z
