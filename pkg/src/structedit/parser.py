"""Lexer and recursive-descent parser for the mini-ML language.

The grammar is LL(1) with one token of lookahead:

    program  := item*
    item     := "let" ["rec"] ident param* "=" expr
    param    := ident | "_" | "(" pattern ")"
    expr     := "let" ["rec"] ident param* "=" expr "in" expr
              | "match" expr "with" branch+
              | "fun" param+ "->" expr
              | "if" expr "then" expr "else" expr
              | binexpr
    branch   := "|" pattern "->" expr
    pattern  := patatom ["::" pattern]
    patatom  := ident | "_" | intlit | "[" "]" | "(" pattern ")"
    binexpr  := operator precedence over appexpr; tightest to loosest:
                application, "*" "/", "+" "-", "::" (right), "=" "<" ">"
    appexpr  := atom atom*
    atom     := ident | intlit | "(" expr ")" | "[" [expr {";" expr}] "]"

Parsing never throws past this module: ``parse`` returns either the root
node or the first ParseDiagnostic.  Offsets count Unicode scalar values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cst import CstNode, NodeKind
from .errors import ParseError
from .textmodel import TextRegion

KEYWORDS = frozenset({"let", "rec", "in", "match", "with", "fun", "if", "then", "else"})

_TWO_CHAR = ("->", "::")
_ONE_CHAR = "=<>+-*/|()[];_"

_ATOM_START = frozenset({"ident", "int", "(", "["})
_CMP_OPS = ("=", "<", ">")
_ADD_OPS = ("+", "-")
_MUL_OPS = ("*", "/")

# Guard against pathological nesting blowing the interpreter stack; real
# buffers sit far below this.
_MAX_DEPTH = 400


@dataclass(frozen=True, slots=True)
class ParseDiagnostic:
    """First point at which parsing failed."""

    position: int
    message: str


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # keyword text, symbol text, "ident", "int", or "eof"
    text: str
    start: int
    end: int


class _Failure(Exception):
    def __init__(self, position: int, message: str):
        super().__init__(message)
        self.position = position
        self.message = message


def tokenize(source: str) -> list[Token]:
    """Lex ``source`` into tokens, dropping whitespace and (nested)
    ``(* ... *)`` comments.  Raises ParseError on a bad character."""
    try:
        return _tokenize(source)
    except _Failure as f:
        raise ParseError(f.message, position=f.position) from None


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(source)
    while True:
        i = _skip_trivia(source, i)
        if i >= n:
            break
        c = source[i]
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_'"):
                j += 1
            word = source[i:j]
            if word == "_":
                tokens.append(Token("_", word, i, j))
            elif word in KEYWORDS:
                tokens.append(Token(word, word, i, j))
            else:
                tokens.append(Token("ident", word, i, j))
            i = j
        elif c.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], i, j))
            i = j
        elif source[i : i + 2] in _TWO_CHAR:
            tokens.append(Token(source[i : i + 2], source[i : i + 2], i, i + 2))
            i += 2
        elif c in _ONE_CHAR:
            tokens.append(Token(c, c, i, i + 1))
            i += 1
        else:
            raise _Failure(i, f"unexpected character {c!r}")
    tokens.append(Token("eof", "", n, n))
    return tokens


def _skip_trivia(source: str, i: int) -> int:
    n = len(source)
    while i < n:
        if source[i].isspace():
            i += 1
        elif source[i : i + 2] == "(*":
            start = i
            depth = 1
            i += 2
            while i < n and depth:
                if source[i : i + 2] == "(*":
                    depth += 1
                    i += 2
                elif source[i : i + 2] == "*)":
                    depth -= 1
                    i += 2
                else:
                    i += 1
            if depth:
                raise _Failure(start, "unterminated comment")
        else:
            break
    return i


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.depth = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise _Failure(tok.start, f"expected {what}")
        return self.next()

    def fail(self, what: str):
        raise _Failure(self.peek().start, f"expected {what}")

    # -- items ---------------------------------------------------------

    def program(self, source_len: int) -> CstNode:
        items = []
        while self.peek().kind == "let":
            items.append(self.let_form(allow_in=False))
        if self.peek().kind != "eof":
            self.fail("'let'")
        return CstNode(NodeKind.PROGRAM, TextRegion(0, source_len), tuple(items))

    def let_form(self, allow_in: bool) -> CstNode:
        let_tok = self.expect("let", "'let'")
        recursive = False
        if self.peek().kind == "rec":
            self.next()
            recursive = True
        name_tok = self.expect("ident", "identifier")
        name = _leaf(NodeKind.IDENT, name_tok)
        params = []
        while self.peek().kind in ("ident", "_", "("):
            params.append(self.param())
        self.expect("=", "'='")
        value = self.expr()
        children = [name, *params, value]
        end = value.region.end
        if allow_in:
            self.expect("in", "'in'")
            body = self.expr()
            children.append(body)
            end = body.region.end
        return CstNode(
            NodeKind.LET_BINDING,
            TextRegion(let_tok.start, end),
            tuple(children),
            recursive=recursive,
        )

    def param(self) -> CstNode:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            inner = _leaf(NodeKind.IDENT, tok)
            return CstNode(NodeKind.PARAMETER, TextRegion(tok.start, tok.end), (inner,))
        if tok.kind == "_":
            self.next()
            inner = CstNode(NodeKind.PATTERN, TextRegion(tok.start, tok.end), label="_")
            return CstNode(NodeKind.PARAMETER, TextRegion(tok.start, tok.end), (inner,))
        lp = self.expect("(", "parameter")
        inner = self.pattern()
        rp = self.expect(")", "')'")
        return CstNode(NodeKind.PARAMETER, TextRegion(lp.start, rp.end), (inner,))

    # -- expressions ---------------------------------------------------

    def expr(self) -> CstNode:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise _Failure(self.peek().start, "nesting too deep")
        try:
            kind = self.peek().kind
            if kind == "let":
                return self.let_form(allow_in=True)
            if kind == "match":
                return self.match_expr()
            if kind == "fun":
                return self.fun_expr()
            if kind == "if":
                return self.if_expr()
            return self.cmp_level()
        finally:
            self.depth -= 1

    def match_expr(self) -> CstNode:
        match_tok = self.next()
        scrutinee = self.expr()
        self.expect("with", "'with'")
        branches = []
        if self.peek().kind != "|":
            self.fail("'|'")
        while self.peek().kind == "|":
            branches.append(self.branch())
        return CstNode(
            NodeKind.MATCH_EXPR,
            TextRegion(match_tok.start, branches[-1].region.end),
            (scrutinee, *branches),
        )

    def branch(self) -> CstNode:
        bar = self.next()
        pat = self.pattern()
        self.expect("->", "'->'")
        body = self.expr()
        return CstNode(NodeKind.BRANCH, TextRegion(bar.start, body.region.end), (pat, body))

    def fun_expr(self) -> CstNode:
        fun_tok = self.next()
        params = [self.param()]
        while self.peek().kind in ("ident", "_", "("):
            params.append(self.param())
        self.expect("->", "'->'")
        body = self.expr()
        return CstNode(
            NodeKind.FUN_EXPR, TextRegion(fun_tok.start, body.region.end), (*params, body)
        )

    def if_expr(self) -> CstNode:
        if_tok = self.next()
        cond = self.expr()
        self.expect("then", "'then'")
        then = self.expr()
        self.expect("else", "'else'")
        alt = self.expr()
        return CstNode(NodeKind.IF_EXPR, TextRegion(if_tok.start, alt.region.end), (cond, then, alt))

    def cmp_level(self) -> CstNode:
        left = self.cons_level()
        while self.peek().kind in _CMP_OPS:
            op = self.next()
            right = self.cons_level()
            left = _binop(op, left, right)
        return left

    def cons_level(self) -> CstNode:
        left = self.add_level()
        if self.peek().kind == "::":
            self.next()
            right = self.cons_level()  # right-associative
            return CstNode(
                NodeKind.CONS_EXPR,
                TextRegion(left.region.start, right.region.end),
                (left, right),
            )
        return left

    def add_level(self) -> CstNode:
        left = self.mul_level()
        while self.peek().kind in _ADD_OPS:
            op = self.next()
            right = self.mul_level()
            left = _binop(op, left, right)
        return left

    def mul_level(self) -> CstNode:
        left = self.app_level()
        while self.peek().kind in _MUL_OPS:
            op = self.next()
            right = self.app_level()
            left = _binop(op, left, right)
        return left

    def app_level(self) -> CstNode:
        atoms = [self.atom()]
        while self.peek().kind in _ATOM_START:
            atoms.append(self.atom())
        if len(atoms) == 1:
            return atoms[0]
        return CstNode(
            NodeKind.APP_EXPR,
            TextRegion(atoms[0].region.start, atoms[-1].region.end),
            tuple(atoms),
        )

    def atom(self) -> CstNode:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return _leaf(NodeKind.IDENT, tok)
        if tok.kind == "int":
            self.next()
            return _leaf(NodeKind.INT_LIT, tok)
        if tok.kind == "(":
            self.next()
            inner = self.expr()
            rp = self.expect(")", "')'")
            return CstNode(NodeKind.PAREN_EXPR, TextRegion(tok.start, rp.end), (inner,))
        if tok.kind == "[":
            self.next()
            elements = []
            if self.peek().kind != "]":
                elements.append(self.expr())
                while self.peek().kind == ";":
                    self.next()
                    elements.append(self.expr())
            rb = self.expect("]", "']'")
            return CstNode(NodeKind.LIST_EXPR, TextRegion(tok.start, rb.end), tuple(elements))
        self.fail("expression")

    # -- patterns ------------------------------------------------------

    def pattern(self) -> CstNode:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise _Failure(self.peek().start, "nesting too deep")
        try:
            atom = self.patatom()
            if self.peek().kind == "::":
                self.next()
                rest = self.pattern()  # right-associative
                return CstNode(
                    NodeKind.PATTERN,
                    TextRegion(atom.region.start, rest.region.end),
                    (atom, rest),
                    label="::",
                )
            return atom
        finally:
            self.depth -= 1

    def patatom(self) -> CstNode:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return _leaf(NodeKind.IDENT, tok)
        if tok.kind == "int":
            self.next()
            return _leaf(NodeKind.INT_LIT, tok)
        if tok.kind == "_":
            self.next()
            return CstNode(NodeKind.PATTERN, TextRegion(tok.start, tok.end), label="_")
        if tok.kind == "[":
            self.next()
            rb = self.expect("]", "']'")
            return CstNode(NodeKind.PATTERN, TextRegion(tok.start, rb.end), label="[]")
        if tok.kind == "(":
            self.next()
            inner = self.pattern()
            rp = self.expect(")", "')'")
            return CstNode(
                NodeKind.PATTERN, TextRegion(tok.start, rp.end), (inner,), label="()"
            )
        self.fail("pattern")


def _leaf(kind: NodeKind, tok: Token) -> CstNode:
    return CstNode(kind, TextRegion(tok.start, tok.end), label=tok.text)


def _binop(op: Token, left: CstNode, right: CstNode) -> CstNode:
    return CstNode(
        NodeKind.BINOP_EXPR,
        TextRegion(left.region.start, right.region.end),
        (left, right),
        label=op.kind,
    )


def parse(source: str) -> CstNode | ParseDiagnostic:
    """Parse a whole program.

    Returns the Program node (region ``[0, len(source))``) on success, or
    the first ParseDiagnostic on malformed input; never raises.
    """
    try:
        return _Parser(_tokenize(source)).program(len(source))
    except _Failure as f:
        return ParseDiagnostic(f.position, f.message)


def parse_expression(source: str) -> CstNode | ParseDiagnostic:
    """Parse ``source`` as a single expression covering the whole input."""
    try:
        parser = _Parser(_tokenize(source))
        node = parser.expr()
        if parser.peek().kind != "eof":
            raise _Failure(parser.peek().start, "expected end of input")
        return node
    except _Failure as f:
        return ParseDiagnostic(f.position, f.message)


def parse_strict(source: str) -> CstNode:
    """Like parse(), but raises ParseError instead of returning a diagnostic."""
    result = parse(source)
    if isinstance(result, ParseDiagnostic):
        raise ParseError(result.message, position=result.position)
    return result


def parse_expression_strict(source: str) -> CstNode:
    result = parse_expression(source)
    if isinstance(result, ParseDiagnostic):
        raise ParseError(result.message, position=result.position)
    return result
