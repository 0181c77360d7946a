from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from redshell_eval.diagnostics import ParseErrorId, Severity
from redshell_eval.lexer import TokenKind, tokenize


def kinds(source):
    tokens, _ = tokenize(source)
    return [t.kind for t in tokens]


def test_command_parameter_string():
    tokens, diags = tokenize('Get-ADGroupMember -Identity "Admins"')
    assert [t.kind for t in tokens] == [
        TokenKind.COMMAND_NAME,
        TokenKind.PARAMETER,
        TokenKind.STRING_LITERAL,
    ]
    assert [t.lexeme for t in tokens] == ["Get-ADGroupMember", "-Identity", '"Admins"']
    assert diags == []


def test_empty_input():
    tokens, diags = tokenize("")
    assert tokens == [] and diags == []


def test_here_string_header_violation_position():
    source = '$x = @"text'
    tokens, diags = tokenize(source)
    assert len(diags) == 1
    diag = diags[0]
    assert diag.rule is ParseErrorId.UNEXPECTED_CHARACTERS_AFTER_HERESTRING_HEADER
    assert diag.severity is Severity.PARSE_ERROR
    assert source[diag.span.start_offset] == "t"  # the char right after @"


def test_valid_here_string_single_token():
    source = '$x = @"\nline one\nline two\n"@'
    tokens, diags = tokenize(source)
    assert diags == []
    assert tokens[-1].kind == TokenKind.HERE_STRING
    assert tokens[-1].lexeme.startswith('@"') and tokens[-1].lexeme.endswith('"@')


def test_here_string_trailing_spaces_tolerated():
    _, diags = tokenize('@"  \ncontent\n"@')
    assert diags == []


def test_variables():
    tokens, _ = tokenize("$name ${long name} $env:PATH $_")
    assert all(t.kind is TokenKind.VARIABLE for t in tokens)
    assert [t.lexeme for t in tokens] == ["$name", "${long name}", "$env:PATH", "$_"]


def test_type_literal_and_static_member():
    tokens, _ = tokenize("[System.Convert]::FromBase64String")
    assert [t.kind for t in tokens] == [
        TokenKind.TYPE_LITERAL,
        TokenKind.STATIC_MEMBER_OP,
        TokenKind.UNKNOWN,
    ]


def test_index_bracket_is_not_type_literal():
    assert kinds("$a[0]") == [
        TokenKind.VARIABLE,
        TokenKind.LBRACKET,
        TokenKind.NUMBER,
        TokenKind.RBRACKET,
    ]


def test_member_access_after_variable():
    tokens, _ = tokenize("$_.CPU")
    assert [t.kind for t in tokens] == [
        TokenKind.VARIABLE,
        TokenKind.MEMBER_ACCESS_OP,
        TokenKind.UNKNOWN,
    ]


def test_dash_operator_vs_parameter():
    tokens, _ = tokenize("Where-Object -Property CPU -gt 10")
    by_lexeme = {t.lexeme: t.kind for t in tokens}
    assert by_lexeme["-Property"] is TokenKind.PARAMETER
    assert by_lexeme["-gt"] is TokenKind.OPERATOR


def test_command_position_after_pipe_and_semicolon():
    tokens, _ = tokenize("gps | select Name; dir")
    names = [t.lexeme for t in tokens if t.kind is TokenKind.COMMAND_NAME]
    assert names == ["gps", "select", "dir"]


def test_percent_alias_in_command_position_only():
    tokens, _ = tokenize("gps | % {$_} ; 5 % 2")
    pct = [t for t in tokens if t.lexeme == "%"]
    assert pct[0].kind is TokenKind.COMMAND_NAME
    assert pct[1].kind is TokenKind.OPERATOR


def test_comment_to_end_of_line():
    tokens, _ = tokenize("Get-Date # trailing note\nGet-Host")
    comment = [t for t in tokens if t.kind is TokenKind.COMMENT]
    assert len(comment) == 1 and comment[0].lexeme == "# trailing note"


def test_single_quoted_string_with_doubled_escape():
    tokens, _ = tokenize("'it''s fine'")
    assert [t.kind for t in tokens] == [TokenKind.STRING_LITERAL]
    assert tokens[0].lexeme == "'it''s fine'"


def test_double_quoted_string_with_backtick_escape():
    tokens, _ = tokenize('"a `" b"')
    assert [t.kind for t in tokens] == [TokenKind.STRING_LITERAL]


def _assert_lossless(source, tokens):
    # Tokens tile the input; the gaps between consecutive token spans
    # contain only whitespace.
    pos = 0
    for tok in tokens:
        gap = source[pos : tok.span.start_offset]
        assert gap.strip(" \t\r\n`") == "", f"non-whitespace gap {gap!r}"
        assert source[tok.span.start_offset : tok.span.end_offset] == tok.lexeme
        pos = tok.span.end_offset
    assert source[pos:].strip(" \t\r\n`") == ""


def test_lossless_reconstruction_examples():
    for source in [
        'Get-ADGroupMember -Identity "Admins"',
        "Get-Process | Where-Object {$_.CPU -gt 10}",
        "$x = (1 + 2",
        "[System.Convert]::FromBase64String('Cmd')",
        'powershell.exe -c "iex ([System.Text.Encoding]::Unicode.GetString())"',
        "  leading spaces\t and tabs ",
        "@'\nhere\n'@ | Out-Null",
    ]:
        tokens, _ = tokenize(source)
        _assert_lossless(source, tokens)


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=120))
def test_totality_and_span_order(source):
    tokens, diags = tokenize(source)  # must never raise
    offsets = [(t.span.start_offset, t.span.end_offset) for t in tokens]
    assert offsets == sorted(offsets)
    for (_, end), (start, _) in zip(offsets, offsets[1:]):
        assert end <= start  # non-overlapping
    for tok in tokens:
        assert source[tok.span.start_offset : tok.span.end_offset] == tok.lexeme


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=100))
def test_totality_on_bytes(data):
    source = data.decode("latin-1")
    tokens, _ = tokenize(source)
    _assert_lossless(source, tokens)
