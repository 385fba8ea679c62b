"""Parser: frozen tree layout for the map example, diagnostics, grammar
corners, and corpus-wide invariants."""

from __future__ import annotations

import pytest

import corpus
import snippets
from structedit.cst import (
    CstNode,
    NodeKind,
    check_node_invariants,
    is_expression_like,
    iter_nodes,
    let_binding_parts,
    structural_equal,
    translate,
    tree_shape_valid,
)
from structedit.errors import ParseError
from structedit.parser import (
    ParseDiagnostic,
    parse,
    parse_expression,
    parse_expression_strict,
    parse_strict,
    tokenize,
)


def parse_ok(text: str) -> CstNode:
    tree = parse(text)
    assert isinstance(tree, CstNode), tree
    return tree


def region(node: CstNode) -> tuple[int, int]:
    return (node.region.start, node.region.end)


# --- the worked example, every frozen offset ------------------------------


def test_snippet_tree_layout():
    tree = parse_ok(snippets.SNIPPET_1)
    assert region(tree) == (0, snippets.LEN_1)
    (binding,) = tree.children
    assert binding.kind is NodeKind.LET_BINDING
    assert binding.recursive
    assert region(binding) == (0, snippets.LEN_1)

    name, params, value, body = let_binding_parts(binding)
    assert body is None
    assert name.label == "map" and region(name) == snippets.NAME_MAP
    assert [region(p) for p in params] == [snippets.PARAM_F, snippets.PARAM_XS]
    assert all(p.kind is NodeKind.PARAMETER for p in params)

    assert value.kind is NodeKind.MATCH_EXPR
    assert region(value) == (snippets.MATCH_START, snippets.LEN_1)
    scrut, b1, b2 = value.children
    assert scrut.kind is NodeKind.IDENT and region(scrut) == snippets.SCRUTINEE
    assert b1.kind is NodeKind.BRANCH and region(b1) == snippets.BRANCH_1
    assert b2.kind is NodeKind.BRANCH and region(b2) == snippets.BRANCH_2

    p1, body1 = b1.children
    assert p1.kind is NodeKind.PATTERN and p1.label == "[]"
    assert region(p1) == snippets.PATTERN_NIL
    assert body1.kind is NodeKind.LIST_EXPR and not body1.children

    p2, body2 = b2.children
    assert p2.label == "::" and region(p2) == snippets.PATTERN_CONS
    px, pxs = p2.children
    assert region(px) == snippets.PATTERN_X and px.label == "x"
    assert region(pxs) == snippets.PATTERN_XS and pxs.label == "xs"

    assert body2.kind is NodeKind.CONS_EXPR and region(body2) == snippets.BODY_CONS
    fx, mapfxs = body2.children
    assert fx.kind is NodeKind.APP_EXPR and region(fx) == snippets.APP_F_X
    assert mapfxs.kind is NodeKind.APP_EXPR and region(mapfxs) == snippets.APP_MAP
    assert [n.label for n in fx.children] == ["f", "x"]
    assert [n.label for n in mapfxs.children] == ["map", "f", "xs"]
    assert region(mapfxs.children[0]) == (snippets.USE_MAP, snippets.USE_MAP + 3)
    assert region(mapfxs.children[2]) == (snippets.USE_XS, snippets.USE_XS + 2)


def test_empty_program():
    tree = parse_ok("")
    assert tree.kind is NodeKind.PROGRAM
    assert tree.children == ()
    assert region(tree) == (0, 0)


def test_whitespace_only_program():
    tree = parse_ok("  \n\n ")
    assert tree.children == ()
    assert region(tree) == (0, 5)


# --- diagnostics ----------------------------------------------------------


def test_incomplete_binding_diagnostic():
    diag = parse("let x =")
    assert isinstance(diag, ParseDiagnostic)
    assert diag.position == 7
    assert diag.message == "expected expression"


def test_missing_name_diagnostic():
    diag = parse("let = 1")
    assert isinstance(diag, ParseDiagnostic)
    assert diag.position == 4
    assert "identifier" in diag.message


def test_missing_branch_diagnostic():
    diag = parse("let a = match x with")
    assert isinstance(diag, ParseDiagnostic)
    assert diag.position == 20
    assert "'|'" in diag.message


def test_trailing_junk_diagnostic():
    diag = parse("let x = 1 )")
    assert isinstance(diag, ParseDiagnostic)
    assert diag.position == 10
    assert "'let'" in diag.message


def test_keyword_cannot_bind():
    diag = parse("let let = 1")
    assert isinstance(diag, ParseDiagnostic)
    assert diag.position == 4


def test_bad_character():
    diag = parse("let x = 1 ? 2")
    assert isinstance(diag, ParseDiagnostic)
    assert diag.position == 10


def test_unterminated_comment():
    diag = parse("let x = (* oops")
    assert isinstance(diag, ParseDiagnostic)
    assert "comment" in diag.message


def test_diagnostic_position_within_input():
    for text in ["let", "let x", "let x = [1; ", "let x = match", "let x = fun ->"]:
        diag = parse(text)
        assert isinstance(diag, ParseDiagnostic), text
        assert 0 <= diag.position <= len(text)


def test_parse_strict_raises():
    with pytest.raises(ParseError) as exc:
        parse_strict("let x =")
    assert exc.value.position == 7


# --- grammar corners ------------------------------------------------------


def expr_of(text: str) -> CstNode:
    node = parse_expression(text)
    assert isinstance(node, CstNode), node
    return node


def shape(node: CstNode):
    """Kind/label skeleton, ignoring regions: ('binop:+', [...])."""
    tag = node.kind.name.lower()
    if node.label:
        tag += f":{node.label}"
    if node.kind in (NodeKind.IDENT, NodeKind.INT_LIT):
        return tag
    return (tag, [shape(c) for c in node.children])


def test_cons_binds_looser_than_application():
    assert shape(expr_of("f x :: map f xs")) == (
        "cons_expr",
        [
            ("app_expr", ["ident:f", "ident:x"]),
            ("app_expr", ["ident:map", "ident:f", "ident:xs"]),
        ],
    )


def test_mul_binds_tighter_than_add():
    assert shape(expr_of("1 + 2 * 3")) == (
        "binop_expr:+",
        ["int_lit:1", ("binop_expr:*", ["int_lit:2", "int_lit:3"])],
    )
    assert shape(expr_of("1 * 2 + 3")) == (
        "binop_expr:+",
        [("binop_expr:*", ["int_lit:1", "int_lit:2"]), "int_lit:3"],
    )


def test_additive_left_assoc():
    assert shape(expr_of("9 - 3 - 2")) == (
        "binop_expr:-",
        [("binop_expr:-", ["int_lit:9", "int_lit:3"]), "int_lit:2"],
    )


def test_cons_right_assoc():
    assert shape(expr_of("a :: b :: c")) == (
        "cons_expr",
        ["ident:a", ("cons_expr", ["ident:b", "ident:c"])],
    )


def test_comparison_loosest_and_left_assoc():
    assert shape(expr_of("1 + 2 = 3 < 4")) == (
        "binop_expr:<",
        [
            ("binop_expr:=", [("binop_expr:+", ["int_lit:1", "int_lit:2"]), "int_lit:3"]),
            "int_lit:4",
        ],
    )


def test_application_of_compound_atoms():
    assert shape(expr_of("f (g x) [1; 2]")) == (
        "app_expr",
        [
            "ident:f",
            ("paren_expr", [("app_expr", ["ident:g", "ident:x"])]),
            ("list_expr", ["int_lit:1", "int_lit:2"]),
        ],
    )


def test_empty_list_region_covers_brackets():
    node = expr_of("[]")
    assert node.kind is NodeKind.LIST_EXPR
    assert node.children == ()
    assert region(node) == (0, 2)


def test_paren_region_covers_parens():
    node = expr_of("( 1 + 2 )")
    assert node.kind is NodeKind.PAREN_EXPR
    assert region(node) == (0, 9)


def test_let_in_expression():
    node = expr_of("let n = 1 in n + n")
    assert node.kind is NodeKind.LET_BINDING
    name, params, value, body = let_binding_parts(node)
    assert name.label == "n" and not params
    assert value.kind is NodeKind.INT_LIT
    assert body is not None and body.kind is NodeKind.BINOP_EXPR


def test_fun_and_if():
    node = expr_of("fun a _ -> if a then 1 else 0")
    assert node.kind is NodeKind.FUN_EXPR
    assert [c.kind for c in node.children] == [
        NodeKind.PARAMETER,
        NodeKind.PARAMETER,
        NodeKind.IF_EXPR,
    ]
    assert len(node.children[2].children) == 3


def test_parenthesized_pattern_parameter():
    tree = parse_ok("let f (x :: y :: _) = x")
    _, params, _, _ = let_binding_parts(tree.children[0])
    (param,) = params
    assert region(param) == (6, 19)  # includes the parentheses
    inner = param.children[0]
    assert inner.label == "::"
    # right-associative: x :: (y :: _)
    assert inner.children[0].label == "x"
    assert inner.children[1].label == "::"
    assert inner.children[1].children[1].label == "_"


def test_nested_comments_are_trivia():
    tree = parse_ok("let (* a (* b *) c *) x = 1")
    name, _, _, _ = let_binding_parts(tree.children[0])
    assert name.label == "x"
    assert region(name) == (22, 23)


def test_int_application_allowed_by_grammar():
    # appexpr := atom atom*; nothing restricts the head to a function.
    assert shape(expr_of("1 2")) == ("app_expr", ["int_lit:1", "int_lit:2"])


def test_primed_identifiers():
    node = expr_of("xs' + x_1")
    assert shape(node) == ("binop_expr:+", ["ident:xs'", "ident:x_1"])


# --- corpus properties ----------------------------------------------------

CORPUS = corpus.programs(150)


def test_corpus_parses_and_keeps_invariants():
    for text in CORPUS:
        tree = parse(text)
        assert isinstance(tree, CstNode), f"{text!r} -> {tree}"
        check_node_invariants(tree, text)
        assert tree_shape_valid(tree)
        assert region(tree) == (0, len(text))


def test_parse_determinism():
    for text in CORPUS[:40]:
        a, b = parse(text), parse(text)
        assert structural_equal(a, b, with_regions=True)


def test_region_faithfulness_over_corpus():
    """Reparsing any expression node's own text yields the same subtree."""
    checked = 0
    for text in CORPUS[:80]:
        tree = parse_strict(text)
        for node in iter_nodes(tree):
            if not is_expression_like(node):
                continue
            if node.kind is NodeKind.LET_BINDING:
                _, _, _, body = let_binding_parts(node)
                if body is None:  # top-level item, not an expression
                    continue
            sub = text[node.region.start : node.region.end]
            reparsed = parse_expression_strict(sub)
            assert structural_equal(
                translate(reparsed, node.region.start), node, with_regions=True
            ), f"{sub!r} in {text!r}"
            checked += 1
    assert checked > 500


def test_tokens_live_in_leaves_or_trivia():
    """Every ident/int token is exactly some childless node's region."""
    for text in CORPUS[:60]:
        tree = parse_strict(text)
        leaf_regions = {region(n) for n in iter_nodes(tree) if not n.children}
        for tok in tokenize(text):
            if tok.kind in ("ident", "int"):
                assert (tok.start, tok.end) in leaf_regions, (text, tok)


def test_parse_expression_requires_full_consumption():
    diag = parse_expression("1 + 2 junk (")
    assert isinstance(diag, ParseDiagnostic)
