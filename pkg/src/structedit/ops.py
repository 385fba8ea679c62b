"""The structural operation catalogue.

Each operation is a pure function from a zipper (plus the buffer text,
when the operation needs to read or rewrite source) to an OpResult.  Text
changes come back as an atomic transaction in pre-edit coordinates; the
returned zipper already lives in post-edit coordinates, with every region
shifted or shrunk to match what a from-scratch reparse of the edited
buffer would produce.  Operations that cannot keep that promise fail
instead of guessing — with one deliberate exception: deletion is allowed
to leave a tree (and buffer) that no longer parses, in which case the
returned zipper is the only authority on structure.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .cst import (
    ChildRole,
    CstNode,
    NodeKind,
    OWN_END_KINDS,
    OWN_START_KINDS,
    child_role,
    is_expression_like,
    iter_nodes,
    let_binding_parts,
    node_shape_ok,
    structural_equal,
    translate,
    adjust_node,
    wrap_sequence,
)
from .errors import (
    AtTop,
    BadRequest,
    KindMismatch,
    NameNotFresh,
    NoBindingFound,
    NoEnclosingBinding,
    NoSibling,
    NotAnExpression,
    ParseError,
)
from .parser import KEYWORDS, ParseDiagnostic, parse, parse_expression
from .textmodel import Edit, EditTransaction, TextRegion, apply_edits
from .zipper import (
    Node,
    Top,
    Zipper,
    descend_path,
    focus_item,
    focus_region,
    go_down,
    go_next,
    go_prev,
    go_up,
    parent_item,
    path_indices,
    unzip,
    zipper_at,
)


@dataclass(frozen=True, slots=True)
class OpResult:
    """Outcome of one structural operation.

    ``transaction`` is None for pure cursor moves.  ``cursor_after`` is a
    post-edit offset; it is the focus start except where an operation says
    otherwise (transpose and move put the cursor on the node that was
    carried to its new position).
    """

    transaction: EditTransaction | None
    cursor_after: int
    zipper_after: Zipper
    selection: TextRegion | None = None


# -- navigation and selection -----------------------------------------


def structural_up(z: Zipper) -> OpResult:
    parent = go_up(z)
    return OpResult(None, focus_region(parent).start, parent)


def structural_down(z: Zipper) -> OpResult:
    child = go_down(z)
    return OpResult(None, child.bounds.start, child)


def structural_next(z: Zipper) -> OpResult:
    sibling = go_next(z)
    return OpResult(None, sibling.bounds.start, sibling)


def structural_prev(z: Zipper) -> OpResult:
    sibling = go_prev(z)
    return OpResult(None, sibling.bounds.start, sibling)


def structural_select(z: Zipper) -> OpResult:
    region = focus_region(z)
    return OpResult(None, region.start, z, selection=region)


# -- transposition and movement ---------------------------------------


def _swap_class(node: CstNode, role: ChildRole) -> str | None:
    """Name of the node's swap-compatibility class, or None if unswappable.

    The names double as error-message vocabulary.  Members of a Sequence
    (an invalid-state container) only swap with members of the same kind.
    """
    if role is ChildRole.BINDER_NAME:
        return None
    if role is ChildRole.TOP_ITEM:
        return "top-level item"
    if role is ChildRole.BRANCH:
        return "branch"
    if role is ChildRole.PARAMETER:
        return "parameter"
    if role is ChildRole.PATTERN:
        return "pattern"
    if role is ChildRole.SEQUENCE_MEMBER:
        return f"loose {node.kind.value} node"
    return "expression"


def _swap_keeps_structure(text: str, old_root: CstNode, edits: tuple[Edit, ...], new_root: CstNode) -> bool:
    """Whether swapping the two regions leaves the parse of the rest intact.

    Swapping node text blindly can reassociate the surrounding structure
    (the classic case: operands inside a left-nested operator chain), so
    the result is checked against a reparse.  When the buffer already
    disagrees with its own text — an invalid intermediate state — there is
    nothing to check against and the zipper stays authoritative.
    """
    pre = parse(text)
    if isinstance(pre, ParseDiagnostic) or not structural_equal(pre, old_root, with_regions=True):
        return True
    post = parse(apply_edits(text, edits))
    if isinstance(post, ParseDiagnostic):
        return False
    return structural_equal(post, new_root, with_regions=True)


def _swap_with_sibling(z: Zipper, text: str, forward: bool) -> OpResult:
    if isinstance(z, Top):
        raise NoSibling("the whole program has no siblings")
    if forward:
        if not z.above:
            raise NoSibling("no following sibling to swap with")
        first, second = z.item, z.above[0]
        first_index = len(z.below)
    else:
        if not z.below:
            raise NoSibling("no preceding sibling to swap with")
        first, second = z.below[0], z.item
        first_index = len(z.below) - 1
    parent = parent_item(z)
    cls_first = _swap_class(first, child_role(parent, first_index))
    cls_second = _swap_class(second, child_role(parent, first_index + 1))
    if cls_first is None or cls_second is None:
        raise KindMismatch("a binding's name cannot be swapped with anything")
    if cls_first != cls_second:
        raise KindMismatch(f"cannot swap a {cls_first} with a {cls_second}")

    # Exchange the two node texts; the separator between them stays put.
    sep_len = second.region.start - first.region.end
    moved_first = translate(second, first.region.start - second.region.start)
    moved_second = translate(first, second.region.length + sep_len)
    edits = (
        Edit(first.region, text[second.region.start : second.region.end]),
        Edit(second.region, text[first.region.start : first.region.end]),
    )
    if forward:
        zipper_after: Node = Node.make(moved_first, z.below, (moved_second, *z.above[1:]), z.parent)
        cursor_after = moved_second.region.start
    else:
        zipper_after = Node.make(moved_second, (moved_first, *z.below[1:]), z.above, z.parent)
        cursor_after = moved_first.region.start
    if not _swap_keeps_structure(text, unzip(z), edits, unzip(zipper_after)):
        raise KindMismatch("these siblings are not swappable: exchanging them would restructure the surrounding text")
    return OpResult(EditTransaction(edits, cursor_after), cursor_after, zipper_after)


def structural_transpose(z: Zipper, text: str) -> OpResult:
    """Swap the focused node with its next sibling.

    The cursor follows the focused node to its new position; the zipper
    keeps focusing the original slot (which now holds the old next
    sibling), so transposing again swaps the same pair straight back.
    """
    return _swap_with_sibling(z, text, forward=True)


def structural_move(z: Zipper, text: str, direction: str) -> OpResult:
    if direction not in ("forward", "backward"):
        raise BadRequest(f"unknown direction {direction!r}")
    return _swap_with_sibling(z, text, forward=direction == "forward")


# -- deletion ----------------------------------------------------------


def _blank(s: str) -> bool:
    return s.strip() == ""


def _deletion_span(text: str, region: TextRegion) -> TextRegion:
    """Extend a doomed node's region over the husk of its line.

    If removal would leave the line whitespace-only, the span grows to
    cover the leading indentation and the trailing newline.  On the last
    line of the buffer there is no trailing newline, so the preceding one
    is swallowed instead — no blank tail line left behind.
    """
    line_start = text.rfind("\n", 0, region.start) + 1
    if not _blank(text[line_start : region.start]):
        return region
    newline = text.find("\n", region.end)
    if newline < 0:
        if not _blank(text[region.end :]):
            return region
        start = line_start - 1 if line_start > 0 else line_start
        return TextRegion(start, len(text))
    if not _blank(text[region.end : newline]):
        return region
    return TextRegion(line_start, newline + 1)


def _node_at_path(root: CstNode, path: list[int]) -> CstNode:
    node = root
    for index in path:
        node = node.children[index]
    return node


def _replace_at(root: CstNode, path: list[int], replacement: CstNode | None) -> CstNode:
    """Rebuild the spine with the node at ``path`` replaced, or removed
    from its parent when ``replacement`` is None."""
    if not path:
        if replacement is None:
            raise ValueError("cannot remove the root")
        return replacement
    index = path[0]
    children = root.children
    if replacement is None and len(path) == 1:
        new_children = children[:index] + children[index + 1 :]
    else:
        new_children = (
            children[:index]
            + (_replace_at(children[index], path[1:], replacement),)
            + children[index + 1 :]
        )
    return root.with_children(new_children)


def _anchors_start_to_child(node: CstNode) -> bool:
    if node.kind is NodeKind.PATTERN:
        return node.label == "::"
    return node.kind not in OWN_START_KINDS


def _anchors_end_to_child(node: CstNode) -> bool:
    if node.kind is NodeKind.PATTERN:
        return node.label == "::"
    return node.kind not in OWN_END_KINDS


def _reanchor_chain(root: CstNode, chain: list[int]) -> CstNode:
    """Re-derive child-anchored region endpoints along an ancestor chain.

    After surgery below them, nodes whose start/end coincide with their
    first/last child (everything without its own delimiter there) must be
    snapped back to those children.  Runs bottom-up so each ancestor sees
    its child's final region.
    """
    for depth in range(len(chain), -1, -1):
        path = chain[:depth]
        node = _node_at_path(root, path)
        if not node.children:
            continue
        start, end = node.region.start, node.region.end
        if _anchors_start_to_child(node):
            start = node.children[0].region.start
        if _anchors_end_to_child(node):
            end = node.children[-1].region.end
        if (start, end) != (node.region.start, node.region.end):
            root = _replace_at(root, path, replace(node, region=TextRegion(start, end)))
    return root


def structural_delete(z: Zipper, text: str) -> OpResult:
    """Delete the focused node and its share of surrounding whitespace.

    The surviving tree is repaired just enough to stay navigable: a parent
    left as a one-atom application collapses to that atom, and a parent
    missing a mandatory part becomes a Sequence holding the leftovers
    (its prefix region covering the parent's remaining text).  Such trees
    — and buffers that no longer parse — are expected outcomes here, not
    errors.  Focus lands on the next sibling, else the previous, else the
    parent; deleting the sole top-level item leaves Top over an empty
    program.
    """
    if isinstance(z, Top):
        raise AtTop("nothing to delete at the top of the tree")
    span = _deletion_span(text, z.bounds)
    root = unzip(z)
    path = path_indices(z)
    parent_path, child_index = path[:-1], path[-1]

    pruned = _replace_at(root, path, None)
    adjusted = adjust_node(pruned, span.start, span.length, 0)

    focus_path: list[int]
    if not parent_path:
        focus_path = [min(child_index, len(adjusted.children) - 1)] if adjusted.children else []
    else:
        parent = _node_at_path(adjusted, parent_path)
        if parent.kind is NodeKind.APP_EXPR and len(parent.children) == 1:
            adjusted = _replace_at(adjusted, parent_path, parent.children[0])
            focus_path = list(parent_path)
        elif (
            parent.children
            and parent.kind is not NodeKind.SEQUENCE
            and not node_shape_ok(parent)
        ):
            wrapped = wrap_sequence(
                parent.region, (), parent.children[0], parent.children[1:]
            )
            adjusted = _replace_at(adjusted, parent_path, wrapped)
            focus_path = parent_path + [min(child_index, len(wrapped.children) - 1)]
        elif parent.children:
            focus_path = parent_path + [min(child_index, len(parent.children) - 1)]
        else:
            focus_path = list(parent_path)

    new_root = _reanchor_chain(adjusted, parent_path)
    zipper_after = descend_path(new_root, focus_path)
    cursor_after = focus_region(zipper_after).start
    transaction = EditTransaction((Edit(span, ""),), cursor_after)
    return OpResult(transaction, cursor_after, zipper_after)


# -- expression extraction ---------------------------------------------


def _is_identifier(name: str) -> bool:
    if not name or name in KEYWORDS:
        return False
    if not (name[0].isalpha() or name[0] == "_"):
        return False
    return all(c.isalnum() or c in "_'" for c in name[1:])


def _strip_parens(node: CstNode) -> CstNode:
    while node.kind is NodeKind.PAREN_EXPR and len(node.children) == 1:
        node = node.children[0]
    return node


def _same_expression(a: CstNode, b: CstNode) -> bool:
    """Structural identity modulo parenthesisation depth."""
    a, b = _strip_parens(a), _strip_parens(b)
    if a.kind is not b.kind or a.label != b.label or a.recursive != b.recursive:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(_same_expression(x, y) for x, y in zip(a.children, b.children))


def _occurrences(scope: CstNode, needle: CstNode) -> list[CstNode]:
    """Outermost subtrees of ``scope`` matching ``needle``, left to right.

    Binder positions (patterns, parameters, bound names) cannot hold an
    expression occurrence and are skipped.
    """
    found: list[CstNode] = []

    def visit(node: CstNode) -> None:
        if _same_expression(node, needle):
            found.append(node)
            return
        for i, child in enumerate(node.children):
            if child_role(node, i) in (ChildRole.EXPRESSION, ChildRole.BRANCH):
                visit(child)

    visit(scope)
    return found


def _ident_char(c: str) -> bool:
    return c.isalnum() or c in "_'"


def extract_expression(z: Zipper, text: str, name: str) -> OpResult:
    """Bind the focused expression to ``name`` with a let, replacing every
    structurally identical occurrence in the enclosing binding's expression."""
    if not _is_identifier(name):
        raise BadRequest(f"{name!r} is not a usable identifier")
    if isinstance(z, Top):
        raise NotAnExpression("the whole program is not an expression")
    role = child_role(parent_item(z), len(z.below))
    if role is not ChildRole.EXPRESSION or not is_expression_like(z.item):
        raise NotAnExpression(f"the focus is a {role.value.replace('_', ' ')}, not an expression")

    # S is the expression child (value, or in-body) of the nearest
    # enclosing let binding that the focus sits inside.
    scope_zipper: Node = z
    holder = go_up(z)
    while isinstance(holder, Node):
        if (
            holder.item.kind is NodeKind.LET_BINDING
            and child_role(holder.item, len(scope_zipper.below)) is ChildRole.EXPRESSION
        ):
            break
        scope_zipper = holder
        holder = go_up(holder)
    if not isinstance(holder, Node):
        raise NoEnclosingBinding("no enclosing let binding to extract into")
    binding = holder.item
    scope = scope_zipper.item

    taken = {n.label for n in iter_nodes(scope) if n.kind is NodeKind.IDENT}
    for i, child in enumerate(binding.children):
        if child_role(binding, i) in (ChildRole.BINDER_NAME, ChildRole.PARAMETER):
            taken.update(n.label for n in iter_nodes(child) if n.kind is NodeKind.IDENT)
    if name in taken:
        raise NameNotFresh(f"{name!r} is already taken in the enclosing binding")

    occurrences = _occurrences(scope, z.item)
    pieces: list[str] = []
    last = scope.region.start
    for occ in occurrences:
        pieces.append(text[last : occ.region.start])
        mention = name
        if occ.region.start > 0 and _ident_char(text[occ.region.start - 1]):
            mention = " " + mention
        if occ.region.end < len(text) and _ident_char(text[occ.region.end]):
            mention = mention + " "
        pieces.append(mention)
        last = occ.region.end
    pieces.append(text[last : scope.region.end])
    body_text = "".join(pieces)

    needle_text = text[z.bounds.start : z.bounds.end]
    replacement = f"let {name} = {needle_text} in {body_text}"
    if scope.region.start > 0 and _ident_char(text[scope.region.start - 1]):
        replacement = " " + replacement
    if scope.region.end < len(text) and _ident_char(text[scope.region.end]):
        replacement = replacement + " "

    inner = parse_expression(replacement)
    if isinstance(inner, ParseDiagnostic):
        raise ParseError(
            f"extraction produced unparseable text: {inner.message}", position=inner.position
        )
    new_subtree = translate(inner, scope.region.start)

    root = unzip(z)
    scope_path = path_indices(scope_zipper)
    adjusted = adjust_node(root, scope.region.start, scope.region.length, len(replacement))
    new_root = _replace_at(adjusted, scope_path, new_subtree)
    new_root = _reanchor_chain(new_root, scope_path[:-1])

    zipper_after = descend_path(new_root, scope_path)
    cursor_after = scope.region.start
    transaction = EditTransaction((Edit(scope.region, replacement),), cursor_after)
    return OpResult(transaction, cursor_after, zipper_after)


# -- jumps -------------------------------------------------------------

_BINDER_ROLES = (ChildRole.BINDER_NAME, ChildRole.PARAMETER, ChildRole.PATTERN)


def _ancestor_steps(z: Node) -> list[tuple[CstNode, int]]:
    """(parent node, child index) pairs from the innermost parent outward."""
    steps: list[tuple[CstNode, int]] = []
    cur: Zipper = z
    while isinstance(cur, Node):
        steps.append((parent_item(cur), len(cur.below)))
        cur = cur.parent
    return steps


def _pattern_ident(node: CstNode, name: str) -> CstNode | None:
    for n in iter_nodes(node):
        if n.kind is NodeKind.IDENT and n.label == name:
            return n
    return None


def _binder_in_scope(parent: CstNode, came_from: int, name: str) -> CstNode | None:
    """The binder ``parent`` contributes for child ``came_from``, if any.

    Encodes the language's scoping: a branch's pattern covers its body, fun
    parameters cover the body, a binding's parameters (and its own name,
    when recursive) cover the bound value, the name covers the in-body, and
    earlier top-level items cover later ones.
    """
    kind = parent.kind
    if kind is NodeKind.BRANCH and came_from == 1:
        return _pattern_ident(parent.children[0], name)
    if kind is NodeKind.FUN_EXPR and came_from == len(parent.children) - 1:
        for param in reversed(parent.children[:-1]):
            hit = _pattern_ident(param, name)
            if hit is not None:
                return hit
        return None
    if kind is NodeKind.LET_BINDING:
        try:
            name_node, params, _value, body = let_binding_parts(parent)
        except IndexError:
            return None
        value_index = 1 + len(params)
        if came_from == value_index:
            for param in reversed(params):
                hit = _pattern_ident(param, name)
                if hit is not None:
                    return hit
            if parent.recursive and name_node.kind is NodeKind.IDENT and name_node.label == name:
                return name_node
            return None
        if body is not None and came_from == value_index + 1:
            if name_node.kind is NodeKind.IDENT and name_node.label == name:
                return name_node
        return None
    if kind is NodeKind.PROGRAM:
        for item in reversed(parent.children[:came_from]):
            if (
                item.kind is NodeKind.LET_BINDING
                and item.children
                and item.children[0].kind is NodeKind.IDENT
                and item.children[0].label == name
            ):
                return item.children[0]
        return None
    return None


def _jump_binding(z: Zipper) -> OpResult:
    if isinstance(z, Top) or z.item.kind is not NodeKind.IDENT:
        raise NoBindingFound("the cursor is not on an identifier")
    name = z.item.label
    steps = _ancestor_steps(z)
    if any(child_role(p, i) in _BINDER_ROLES for p, i in steps):
        # already on a binder: it is its own binding site
        return OpResult(None, z.bounds.start, z)
    for parent, index in steps:
        target = _binder_in_scope(parent, index, name)
        if target is not None:
            cursor = target.region.start
            return OpResult(None, cursor, zipper_at(unzip(z), cursor))
    raise NoBindingFound(f"{name!r} is not bound here")


def _jump_parameter(z: Zipper) -> OpResult:
    if isinstance(z, Top):
        raise NoBindingFound("no enclosing function")
    candidates = [z.item] + [parent for parent, _ in _ancestor_steps(z)]
    for node in candidates:
        if node.kind in (NodeKind.FUN_EXPR, NodeKind.LET_BINDING):
            for child in node.children:
                if child.kind is NodeKind.PARAMETER:
                    cursor = child.region.start
                    return OpResult(None, cursor, zipper_at(unzip(z), cursor))
    raise NoBindingFound("no enclosing function with parameters")


def jump_to(z: Zipper, target: str) -> OpResult:
    if target == "binding":
        return _jump_binding(z)
    if target == "parameter":
        return _jump_parameter(z)
    raise BadRequest(f"unknown jump target {target!r}")
