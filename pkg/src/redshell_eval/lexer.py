"""Tolerant PowerShell lexer.

Turns arbitrary text into a token stream with source spans. Never raises
on any input: unrecognized bytes become Unknown tokens, and the only
lexical diagnostic is a here-string opener followed by non-whitespace
before the line break.

Covered forms: single/double-quoted strings with backtick escapes,
here-strings, ``$name`` / ``${name}`` / ``$env:NAME`` variables,
``[Namespace.Type]`` type literals, ``::`` and ``.`` member operators,
``-Parameter`` tokens, ``#`` line comments, pipes, semicolons, numbers,
and bareword command names. Expandable-string interiors are opaque.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from redshell_eval.diagnostics import Diagnostic, ParseErrorId, SourceSpan


class TokenKind(Enum):
    COMMAND_NAME = "CommandName"
    PARAMETER = "Parameter"
    VARIABLE = "Variable"
    STRING_LITERAL = "StringLiteral"
    HERE_STRING = "HereString"
    NUMBER = "Number"
    OPERATOR = "Operator"
    PIPE = "Pipe"
    SEMICOLON = "Semicolon"
    LPAREN = "LParen"
    RPAREN = "RParen"
    LBRACE = "LBrace"
    RBRACE = "RBrace"
    LBRACKET = "LBracket"
    RBRACKET = "RBracket"
    TYPE_LITERAL = "TypeLiteral"
    STATIC_MEMBER_OP = "StaticMemberOp"
    MEMBER_ACCESS_OP = "MemberAccessOp"
    COMMENT = "Comment"
    NEWLINE = "Newline"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: SourceSpan


# Comparison/logical operators spelled like parameters (-gt, -and, ...).
_DASH_OPERATORS = frozenset(
    """eq ne gt ge lt le like notlike match notmatch contains notcontains
    in notin replace creplace ceq cne cgt cge clt cle clike cnotlike cmatch
    cnotmatch ccontains cnotcontains and or not xor band bor bxor bnot shl
    shr join split is isnot as f""".split()
)

# Longest-first so multi-char operators win over their prefixes.
_SYMBOL_OPERATORS = (
    "+=", "-=", "*=", "/=", "%=", "++", "--", "..", ">>",
    "<=", ">=", "=", "+", "*", "/", "%", "^", "<", ">", "!", "&", ",", "@",
)

_WORD = re.compile(r"[A-Za-z0-9_]")
_TYPE_BODY = re.compile(r"^[A-Za-z_][A-Za-z0-9_.,+\[\] ]*$")
_NUMBER = re.compile(
    r"(?:0[xX][0-9a-fA-F]+|\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)(?:[kKmMgGtTpP][bB])?"
)
# Bareword arguments and command names; embeds dots, colons, backslashes.
_BAREWORD_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "_-.:\\/~!@#%^*+?"
)
_BAREWORD_STOP = frozenset(" \t\r\n|;(){}[]\"'`$,<>=")

# Token kinds a "." can attach to as member access.
_MEMBER_BASES = frozenset(
    {
        TokenKind.VARIABLE,
        TokenKind.RPAREN,
        TokenKind.RBRACKET,
        TokenKind.TYPE_LITERAL,
        TokenKind.STRING_LITERAL,
        TokenKind.HERE_STRING,
        TokenKind.UNKNOWN,
    }
)

_COMMAND_POSITION_AFTER = frozenset(
    {
        TokenKind.NEWLINE,
        TokenKind.PIPE,
        TokenKind.SEMICOLON,
        TokenKind.LBRACE,
        TokenKind.LPAREN,
    }
)
_ASSIGNMENT_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%="})


class _Scanner:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.n = len(source)
        self.tokens: list[Token] = []
        self.diagnostics: list[Diagnostic] = []
        self._line_starts = [0]
        for i, ch in enumerate(source):
            if ch == "\n":
                self._line_starts.append(i + 1)

    def _line_col(self, offset: int) -> tuple[int, int]:
        lo, hi = 0, len(self._line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - self._line_starts[lo] + 1

    def span(self, start: int, end: int) -> SourceSpan:
        line, col = self._line_col(start)
        return SourceSpan(start, end, line, col)

    def emit(self, kind: TokenKind, start: int, end: int) -> None:
        self.tokens.append(Token(kind, self.src[start:end], self.span(start, end)))

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.src[i] if i < self.n else ""

    def last_significant(self) -> Token | None:
        for tok in reversed(self.tokens):
            if tok.kind is not TokenKind.COMMENT:
                return tok
        return None

    def at_command_position(self) -> bool:
        prev = self.last_significant()
        if prev is None:
            return True
        if prev.kind in _COMMAND_POSITION_AFTER:
            return True
        if prev.kind is TokenKind.OPERATOR and prev.lexeme in (_ASSIGNMENT_OPS | {"&"}):
            return True
        return False

    # -- scanners ---------------------------------------------------------

    def scan_quoted(self, quote: str) -> None:
        start = self.pos
        self.pos += 1
        while self.pos < self.n:
            ch = self.src[self.pos]
            if ch == "`" and quote == '"' and self.pos + 1 < self.n:
                self.pos += 2
                continue
            if ch == quote:
                if self.peek(1) == quote:  # doubled quote escape
                    self.pos += 2
                    continue
                self.pos += 1
                break
            self.pos += 1
        self.emit(TokenKind.STRING_LITERAL, start, self.pos)

    def scan_here_string(self) -> None:
        start = self.pos
        quote = self.src[self.pos + 1]
        header_end = self.pos + 2
        scan = header_end
        while scan < self.n and self.src[scan] not in "\n":
            if self.src[scan] not in " \t\r":
                # Non-whitespace after the opener: header violation.
                self.diagnostics.append(
                    Diagnostic.create(
                        ParseErrorId.UNEXPECTED_CHARACTERS_AFTER_HERESTRING_HEADER,
                        self.span(scan, scan + 1),
                        "no characters are allowed after a here-string header "
                        "before the end of the line",
                    )
                )
                self.emit(TokenKind.UNKNOWN, start, header_end)
                self.pos = header_end
                return
            scan += 1
        terminator = f"\n{quote}@"
        idx = self.src.find(terminator, scan)
        if idx == -1:
            self.pos = self.n
        else:
            self.pos = idx + len(terminator)
        self.emit(TokenKind.HERE_STRING, start, self.pos)

    def scan_variable(self) -> None:
        start = self.pos
        self.pos += 1
        ch = self.peek()
        if ch == "{":
            depth = 1
            self.pos += 1
            while self.pos < self.n and depth:
                if self.src[self.pos] == "{":
                    depth += 1
                elif self.src[self.pos] == "}":
                    depth -= 1
                self.pos += 1
        elif ch in "_$^?":
            self.pos += 1
            while self.pos < self.n and _WORD.match(self.src[self.pos]):
                self.pos += 1
        elif ch and (_WORD.match(ch)):
            while self.pos < self.n and (
                _WORD.match(self.src[self.pos]) or self.src[self.pos] == ":"
            ):
                # Scope/drive prefix like $env:NAME or $global:x.
                if self.src[self.pos] == ":" and not (
                    self.pos + 1 < self.n and _WORD.match(self.src[self.pos + 1])
                ):
                    break
                self.pos += 1
        else:
            self.emit(TokenKind.UNKNOWN, start, self.pos)
            return
        self.emit(TokenKind.VARIABLE, start, self.pos)

    def scan_bracket(self) -> None:
        start = self.pos
        depth = 0
        scan = self.pos
        while scan < self.n:
            ch = self.src[scan]
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
                if depth == 0:
                    break
            elif ch == "\n":
                scan = -1
                break
            scan += 1
        if scan not in (-1, self.n) and depth == 0:
            body = self.src[start + 1 : scan]
            if _TYPE_BODY.match(body):
                self.pos = scan + 1
                self.emit(TokenKind.TYPE_LITERAL, start, self.pos)
                return
        self.pos += 1
        self.emit(TokenKind.LBRACKET, start, self.pos)

    def scan_dash(self) -> None:
        start = self.pos
        ch1 = self.peek(1)
        if ch1 and ch1.isalpha():
            scan = self.pos + 1
            while scan < self.n and (_WORD.match(self.src[scan]) or self.src[scan] == "-"):
                scan += 1
            word = self.src[start + 1 : scan]
            self.pos = scan
            if word.lower() in _DASH_OPERATORS:
                self.emit(TokenKind.OPERATOR, start, self.pos)
            else:
                self.emit(TokenKind.PARAMETER, start, self.pos)
            return
        if ch1.isdigit():
            m = _NUMBER.match(self.src, self.pos + 1)
            if m:
                self.pos = m.end()
                self.emit(TokenKind.NUMBER, start, self.pos)
                return
        if ch1 in ("=", "-"):
            self.pos += 2
            self.emit(TokenKind.OPERATOR, start, self.pos)
            return
        self.pos += 1
        self.emit(TokenKind.OPERATOR, start, self.pos)

    def scan_bareword(self, command_position: bool) -> None:
        start = self.pos
        while self.pos < self.n:
            ch = self.src[self.pos]
            if ch in _BAREWORD_STOP or ch not in _BAREWORD_CHARS:
                break
            self.pos += 1
        if self.pos == start:  # unrecognized byte
            self.pos += 1
            self.emit(TokenKind.UNKNOWN, start, self.pos)
            return
        kind = TokenKind.COMMAND_NAME if command_position else TokenKind.UNKNOWN
        self.emit(kind, start, self.pos)

    # -- main loop --------------------------------------------------------

    def run(self) -> None:
        while self.pos < self.n:
            ch = self.src[self.pos]
            start = self.pos

            if ch == "\n":
                self.pos += 1
                self.emit(TokenKind.NEWLINE, start, self.pos)
                continue
            if ch in " \t\r":
                self.pos += 1
                continue
            if ch == "`":
                if self.peek(1) == "\n":  # line continuation
                    self.pos += 2
                    continue
                self.pos += 1
                self.emit(TokenKind.UNKNOWN, start, self.pos)
                continue
            if ch == "#":
                while self.pos < self.n and self.src[self.pos] != "\n":
                    self.pos += 1
                self.emit(TokenKind.COMMENT, start, self.pos)
                continue
            if ch == "@" and self.peek(1) in ("'", '"'):
                self.scan_here_string()
                continue
            if ch in ("'", '"'):
                self.scan_quoted(ch)
                continue
            if ch == "$":
                self.scan_variable()
                continue
            if ch == "[":
                self.scan_bracket()
                continue
            if ch == ":" and self.peek(1) == ":":
                self.pos += 2
                self.emit(TokenKind.STATIC_MEMBER_OP, start, self.pos)
                continue
            if ch == "|":
                self.pos += 1
                self.emit(TokenKind.PIPE, start, self.pos)
                continue
            if ch == ";":
                self.pos += 1
                self.emit(TokenKind.SEMICOLON, start, self.pos)
                continue
            if ch == "(":
                self.pos += 1
                self.emit(TokenKind.LPAREN, start, self.pos)
                continue
            if ch == ")":
                self.pos += 1
                self.emit(TokenKind.RPAREN, start, self.pos)
                continue
            if ch == "{":
                self.pos += 1
                self.emit(TokenKind.LBRACE, start, self.pos)
                continue
            if ch == "}":
                self.pos += 1
                self.emit(TokenKind.RBRACE, start, self.pos)
                continue
            if ch == "]":
                self.pos += 1
                self.emit(TokenKind.RBRACKET, start, self.pos)
                continue
            if ch == "-":
                self.scan_dash()
                continue

            command_position = self.at_command_position()

            if ch == "." :
                prev = self.last_significant()
                nxt = self.peek(1)
                adjacent = (
                    prev is not None
                    and prev.kind in _MEMBER_BASES
                    and prev.span.end_offset == self.pos
                )
                if adjacent and (nxt.isalpha() or nxt == "_"):
                    self.pos += 1
                    self.emit(TokenKind.MEMBER_ACCESS_OP, start, self.pos)
                    continue
                self.scan_bareword(command_position)
                continue

            if ch.isdigit():
                m = _NUMBER.match(self.src, self.pos)
                end = m.end() if m else self.pos + 1
                # Digits glued to a bareword tail stay one bareword (e.g. 2fa).
                if end < self.n and self.src[end] in _BAREWORD_CHARS and self.src[end] not in "<>":
                    self.scan_bareword(command_position)
                    continue
                self.pos = end
                self.emit(TokenKind.NUMBER, start, self.pos)
                continue

            if ch in ("%", "?") and command_position:
                # Single-char aliases (ForEach-Object / Where-Object).
                self.pos += 1
                self.emit(TokenKind.COMMAND_NAME, start, self.pos)
                continue

            for op in _SYMBOL_OPERATORS:
                if self.src.startswith(op, self.pos):
                    self.pos += len(op)
                    self.emit(TokenKind.OPERATOR, start, self.pos)
                    break
            else:
                self.scan_bareword(command_position)


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Lex arbitrary text; total, never raises.

    Returns the token stream (whitespace skipped, comments kept) and any
    lexical diagnostics.
    """
    scanner = _Scanner(source)
    scanner.run()
    return scanner.tokens, scanner.diagnostics
