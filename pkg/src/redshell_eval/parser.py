"""Tolerant recursive-descent parser for the supported statement grammar.

Builds an AST from the token stream and never aborts: grammar violations
become diagnostics plus ErrorNode recovery points. The statement grammar
covers pipelines of commands, assignments, parenthesized expressions,
static method calls on type literals, and script blocks as opaque
argument bodies.

Each grammar violation yields exactly one diagnostic: an unclosed "(" in
expression context maps to MissingEndParenthesisInExpression, an unclosed
method argument list to MissingEndParenthesisInMethodCall, and anything
else to UnexpectedToken. Recovery synchronizes at ";", "|" and newline
boundaries without cascading duplicates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from redshell_eval.diagnostics import Diagnostic, ParseErrorId, Severity, SourceSpan
from redshell_eval.lexer import Token, TokenKind


class NodeKind(Enum):
    SCRIPT = "Script"
    PIPELINE = "Pipeline"
    COMMAND = "Command"
    ARGUMENT = "Argument"
    ASSIGNMENT = "Assignment"
    PAREN_EXPR = "ParenExpr"
    METHOD_CALL = "MethodCall"
    SCRIPT_BLOCK = "ScriptBlock"
    LITERAL = "Literal"
    VARIABLE_REF = "VariableRef"
    TYPE_REF = "TypeRef"
    ERROR_NODE = "ErrorNode"


@dataclass
class AstNode:
    kind: NodeKind
    span: SourceSpan
    text: str | None = None
    children: list["AstNode"] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        obj: dict = {
            "kind": self.kind.value,
            "span": [self.span.start_offset, self.span.end_offset],
        }
        if self.text is not None:
            obj["text"] = self.text
        if self.children:
            obj["children"] = [c.to_json_obj() for c in self.children]
        return obj


def ast_to_json(node: AstNode) -> str:
    """Stable JSON dump of an AST, for debugging and golden tests."""
    return json.dumps(node.to_json_obj(), sort_keys=True, indent=2)


_TERMINATORS = frozenset({TokenKind.NEWLINE, TokenKind.SEMICOLON})
_CLOSERS = frozenset({TokenKind.RPAREN, TokenKind.RBRACE, TokenKind.RBRACKET})
_PRIMARY_HEADS = frozenset(
    {
        TokenKind.VARIABLE,
        TokenKind.NUMBER,
        TokenKind.STRING_LITERAL,
        TokenKind.HERE_STRING,
        TokenKind.TYPE_LITERAL,
        TokenKind.LPAREN,
    }
)
_ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%="})
_LEAF_KINDS = {
    TokenKind.VARIABLE: NodeKind.VARIABLE_REF,
    TokenKind.NUMBER: NodeKind.LITERAL,
    TokenKind.STRING_LITERAL: NodeKind.LITERAL,
    TokenKind.HERE_STRING: NodeKind.LITERAL,
    TokenKind.TYPE_LITERAL: NodeKind.TYPE_REF,
}


def _merge(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    if b.start_offset < a.start_offset:
        a, b = b, a
    return SourceSpan(
        a.start_offset, max(a.end_offset, b.end_offset), a.line, a.column
    )


def _node_from(kind: NodeKind, tokens_span: SourceSpan, text: str | None = None,
               children: list[AstNode] | None = None) -> AstNode:
    node = AstNode(kind, tokens_span, text, children or [])
    for child in node.children:
        node.span = _merge(node.span, child.span)
    return node


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = [t for t in tokens if t.kind is not TokenKind.COMMENT]
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self.recovering = False

    # -- cursor helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def eof_span(self) -> SourceSpan:
        if self.tokens:
            last = self.tokens[-1].span
            return SourceSpan(last.end_offset, last.end_offset, last.line, last.column)
        return SourceSpan(0, 0, 1, 1)

    def report(self, rule: ParseErrorId, span: SourceSpan, message: str) -> None:
        # One diagnostic per recovery point: suppress until the next
        # statement boundary once a violation has been recorded.
        if not self.recovering:
            self.diagnostics.append(Diagnostic.create(rule, span, message))
        self.recovering = True

    # -- grammar -----------------------------------------------------------

    def parse_script(self) -> AstNode:
        statements: list[AstNode] = []
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind in _TERMINATORS:
                self.advance()
                self.recovering = False
                continue
            statements.append(self.parse_statement())
        span = self.tokens[0].span if self.tokens else SourceSpan(0, 0, 1, 1)
        return _node_from(NodeKind.SCRIPT, span, children=statements)

    def parse_statement(self) -> AstNode:
        tok = self.peek()
        if tok.kind in _CLOSERS:
            self.report(
                ParseErrorId.UNEXPECTED_TOKEN, tok.span,
                f"unexpected token {tok.lexeme!r}",
            )
            self.advance()
            return AstNode(NodeKind.ERROR_NODE, tok.span, tok.lexeme)
        if tok.kind is TokenKind.VARIABLE:
            op = self.peek(1)
            if op is not None and op.kind is TokenKind.OPERATOR and op.lexeme in _ASSIGN_OPS:
                return self.parse_assignment()
        return self.parse_pipeline(frozenset())

    def parse_assignment(self) -> AstNode:
        var = self.advance()
        target = AstNode(NodeKind.VARIABLE_REF, var.span, var.lexeme)
        op = self.advance()
        nxt = self.peek()
        if nxt is None or nxt.kind in _TERMINATORS:
            # Empty right-hand side: tolerated with an error marker.
            rhs = AstNode(NodeKind.ERROR_NODE, op.span)
        else:
            rhs = self.parse_pipeline(frozenset())
        return _node_from(NodeKind.ASSIGNMENT, var.span, op.lexeme, [target, rhs])

    def parse_pipeline(self, stop: frozenset) -> AstNode:
        elements: list[AstNode] = []
        first_span = self.peek().span if self.peek() else self.eof_span()
        while True:
            tok = self.peek()
            if tok is None or tok.kind in stop or tok.kind in _TERMINATORS:
                break
            elements.append(self.parse_element(stop))
            tok = self.peek()
            if tok is not None and tok.kind is TokenKind.PIPE:
                pipe = self.advance()
                nxt = self.peek()
                if nxt is None or nxt.kind in stop or nxt.kind in _TERMINATORS:
                    self.report(
                        ParseErrorId.UNEXPECTED_TOKEN, pipe.span,
                        "an empty pipeline element is not allowed",
                    )
                    break
                continue
            break
        return _node_from(NodeKind.PIPELINE, first_span, children=elements)

    def parse_element(self, stop: frozenset) -> AstNode:
        tok = self.peek()
        if tok.kind in _PRIMARY_HEADS or (
            tok.kind is TokenKind.OPERATOR and tok.lexeme in ("-", "!", "+", "@", "--")
        ):
            return self.parse_expression(stop)
        if tok.kind in (TokenKind.COMMAND_NAME, TokenKind.UNKNOWN):
            return self.parse_command(stop)
        if tok.kind in _CLOSERS or tok.kind in (
            TokenKind.PIPE, TokenKind.PARAMETER, TokenKind.OPERATOR,
            TokenKind.STATIC_MEMBER_OP, TokenKind.MEMBER_ACCESS_OP,
            TokenKind.LBRACKET, TokenKind.RBRACKET,
        ):
            self.report(
                ParseErrorId.UNEXPECTED_TOKEN, tok.span,
                f"unexpected token {tok.lexeme!r}",
            )
            self.advance()
            return AstNode(NodeKind.ERROR_NODE, tok.span, tok.lexeme)
        if tok.kind is TokenKind.LBRACE:
            return self.parse_script_block()
        # Anything else is tolerated as an opaque element.
        self.advance()
        return AstNode(NodeKind.ARGUMENT, tok.span, tok.lexeme)

    def parse_command(self, stop: frozenset) -> AstNode:
        head = self.advance()
        children: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind in stop or tok.kind in _TERMINATORS or tok.kind is TokenKind.PIPE:
                break
            if tok.kind is TokenKind.LPAREN:
                children.append(self.parse_postfix(self.parse_paren_expr()))
            elif tok.kind is TokenKind.LBRACE:
                children.append(self.parse_script_block())
            elif tok.kind in _LEAF_KINDS:
                children.append(self.parse_primary_with_postfix())
            elif tok.kind in _CLOSERS:
                self.report(
                    ParseErrorId.UNEXPECTED_TOKEN, tok.span,
                    f"unexpected token {tok.lexeme!r}",
                )
                self.advance()
                children.append(AstNode(NodeKind.ERROR_NODE, tok.span, tok.lexeme))
            else:
                self.advance()
                children.append(AstNode(NodeKind.ARGUMENT, tok.span, tok.lexeme))
        return _node_from(NodeKind.COMMAND, head.span, head.lexeme, children)

    def parse_expression(self, stop: frozenset) -> AstNode:
        parts: list[AstNode] = []
        first_span = self.peek().span if self.peek() else self.eof_span()
        # Prefix operators.
        while True:
            tok = self.peek()
            if tok is not None and tok.kind is TokenKind.OPERATOR:
                self.advance()
                parts.append(AstNode(NodeKind.ARGUMENT, tok.span, tok.lexeme))
            else:
                break
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in _PRIMARY_HEADS:
                break
            if tok.kind is TokenKind.LPAREN:
                parts.append(self.parse_postfix(self.parse_paren_expr()))
            else:
                parts.append(self.parse_primary_with_postfix())
            tok = self.peek()
            if tok is not None and (
                tok.kind is TokenKind.OPERATOR
                or (tok.kind is TokenKind.UNKNOWN and tok.lexeme[:1].isalpha())
            ):
                self.advance()
                parts.append(AstNode(NodeKind.ARGUMENT, tok.span, tok.lexeme))
                continue
            break
        if not parts:
            tok = self.peek()
            span = tok.span if tok else self.eof_span()
            if tok is not None:
                self.advance()
            return AstNode(NodeKind.ERROR_NODE, span)
        if len(parts) == 1:
            return parts[0]
        return _node_from(NodeKind.PIPELINE, first_span, children=parts)

    def parse_primary_with_postfix(self) -> AstNode:
        tok = self.advance()
        return self.parse_postfix(AstNode(_LEAF_KINDS[tok.kind], tok.span, tok.lexeme))

    def parse_postfix(self, node: AstNode) -> AstNode:
        while True:
            nxt = self.peek()
            if nxt is None:
                break
            if nxt.kind in (TokenKind.STATIC_MEMBER_OP, TokenKind.MEMBER_ACCESS_OP):
                is_static = nxt.kind is TokenKind.STATIC_MEMBER_OP
                self.advance()
                name = self.peek()
                if name is None or name.kind not in (TokenKind.UNKNOWN, TokenKind.COMMAND_NAME):
                    break
                self.advance()
                lparen = self.peek()
                if (
                    lparen is not None
                    and lparen.kind is TokenKind.LPAREN
                    and lparen.span.start_offset == name.span.end_offset
                ):
                    self.advance()
                    args = self.parse_method_args(lparen)
                    node = _node_from(
                        NodeKind.METHOD_CALL, node.span, name.lexeme, [node, *args]
                    )
                else:
                    kind = NodeKind.METHOD_CALL if is_static else NodeKind.ARGUMENT
                    member = AstNode(NodeKind.LITERAL, name.span, name.lexeme)
                    node = _node_from(kind, node.span, name.lexeme, [node, member])
                continue
            if nxt.kind is TokenKind.LBRACKET:
                open_tok = self.advance()
                depth = 1
                last = open_tok
                while True:
                    inner = self.peek()
                    if inner is None:
                        self.report(
                            ParseErrorId.UNEXPECTED_TOKEN, open_tok.span,
                            "missing ']' after index expression",
                        )
                        break
                    last = self.advance()
                    if last.kind is TokenKind.LBRACKET:
                        depth += 1
                    elif last.kind is TokenKind.RBRACKET:
                        depth -= 1
                        if depth == 0:
                            break
                node = AstNode(
                    NodeKind.ARGUMENT, _merge(node.span, last.span), node.text, [node]
                )
                continue
            break
        return node

    def parse_method_args(self, lparen: Token) -> list[AstNode]:
        args: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok is None:
                self.report(
                    ParseErrorId.MISSING_END_PARENTHESIS_IN_METHOD_CALL,
                    lparen.span,
                    "missing ')' in method call",
                )
                break
            if tok.kind is TokenKind.RPAREN:
                self.advance()
                break
            if tok.kind is TokenKind.NEWLINE:
                self.advance()
                continue
            if tok.kind is TokenKind.OPERATOR and tok.lexeme == ",":
                self.advance()
                continue
            if tok.kind is TokenKind.SEMICOLON or tok.kind in (
                TokenKind.RBRACE, TokenKind.RBRACKET,
            ):
                self.report(
                    ParseErrorId.MISSING_END_PARENTHESIS_IN_METHOD_CALL,
                    lparen.span,
                    "missing ')' in method call",
                )
                break
            args.append(self.parse_element(frozenset({TokenKind.RPAREN})))
        return args

    def parse_paren_expr(self) -> AstNode:
        lparen = self.advance()
        children: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok is None:
                self.report(
                    ParseErrorId.MISSING_END_PARENTHESIS_IN_EXPRESSION,
                    lparen.span,
                    "missing closing ')' in expression",
                )
                break
            if tok.kind is TokenKind.RPAREN:
                self.advance()
                break
            if tok.kind in (TokenKind.NEWLINE, TokenKind.SEMICOLON):
                self.advance()
                continue
            if tok.kind in (TokenKind.RBRACE, TokenKind.RBRACKET):
                self.report(
                    ParseErrorId.MISSING_END_PARENTHESIS_IN_EXPRESSION,
                    lparen.span,
                    "missing closing ')' in expression",
                )
                break
            children.append(
                self.parse_pipeline(frozenset({TokenKind.RPAREN, TokenKind.RBRACE, TokenKind.RBRACKET}))
            )
        return _node_from(NodeKind.PAREN_EXPR, lparen.span, children=children)

    def parse_script_block(self) -> AstNode:
        open_tok = self.advance()
        depth = 1
        last = open_tok
        while depth:
            tok = self.peek()
            if tok is None:
                self.report(
                    ParseErrorId.UNEXPECTED_TOKEN,
                    open_tok.span,
                    "missing closing '}' in script block",
                )
                break
            last = self.advance()
            if last.kind is TokenKind.LBRACE:
                depth += 1
            elif last.kind is TokenKind.RBRACE:
                depth -= 1
        span = _merge(open_tok.span, last.span)
        return AstNode(NodeKind.SCRIPT_BLOCK, span)


def parse(tokens: list[Token]) -> tuple[AstNode, list[Diagnostic]]:
    """Parse a token stream; total, never raises.

    Returns the (possibly recovered) AST and parse-error diagnostics.
    """
    parser = _Parser(tokens)
    ast = parser.parse_script()
    return ast, parser.diagnostics


def has_parse_error(diagnostics: list[Diagnostic]) -> bool:
    """True iff at least one diagnostic carries ParseError severity."""
    return any(d.severity is Severity.PARSE_ERROR for d in diagnostics)
