from __future__ import annotations

import json

from hypothesis import given, settings
from hypothesis import strategies as st

from redshell_eval.diagnostics import Diagnostic, ParseErrorId, RuleId, Severity, SourceSpan
from redshell_eval.lexer import tokenize
from redshell_eval.parser import NodeKind, ast_to_json, has_parse_error, parse


def parse_source(source):
    tokens, lex_diags = tokenize(source)
    ast, diags = parse(tokens)
    return ast, lex_diags + diags


def rule_ids(diags):
    return [d.rule for d in diags]


def test_clean_pipeline_no_diagnostics():
    _, diags = parse_source("Get-Process | Where-Object {$_.CPU -gt 10}")
    assert diags == []


def test_unclosed_expression_paren():
    _, diags = parse_source("$x = (1 + 2")
    assert rule_ids(diags) == [ParseErrorId.MISSING_END_PARENTHESIS_IN_EXPRESSION]


def test_unclosed_method_call_paren():
    _, diags = parse_source("[System.Convert]::FromBase64String('Cmd'")
    assert rule_ids(diags) == [ParseErrorId.MISSING_END_PARENTHESIS_IN_METHOD_CALL]


def test_stray_closing_brace():
    _, diags = parse_source("}")
    assert rule_ids(diags) == [ParseErrorId.UNEXPECTED_TOKEN]


def test_closed_method_call_clean():
    ast, diags = parse_source("[System.Convert]::FromBase64String('Cmd')")
    assert diags == []
    dumped = ast_to_json(ast)
    assert "MethodCall" in dumped


def test_method_call_on_variable_unclosed():
    _, diags = parse_source("$data.Substring(0, 4")
    assert rule_ids(diags) == [ParseErrorId.MISSING_END_PARENTHESIS_IN_METHOD_CALL]


def test_nested_unclosed_parens_single_diagnostic():
    _, diags = parse_source("$x = ((1 + 2)")
    assert rule_ids(diags) == [ParseErrorId.MISSING_END_PARENTHESIS_IN_EXPRESSION]


def test_one_diagnostic_per_statement_recovery():
    _, diags = parse_source("} }")
    assert rule_ids(diags) == [ParseErrorId.UNEXPECTED_TOKEN]
    _, diags = parse_source("} ; }")
    assert rule_ids(diags) == [
        ParseErrorId.UNEXPECTED_TOKEN,
        ParseErrorId.UNEXPECTED_TOKEN,
    ]


def test_leading_pipe_is_unexpected():
    _, diags = parse_source("| Select-Object Name")
    assert rule_ids(diags) == [ParseErrorId.UNEXPECTED_TOKEN]


def test_trailing_pipe_is_unexpected():
    _, diags = parse_source("Get-Process |")
    assert rule_ids(diags) == [ParseErrorId.UNEXPECTED_TOKEN]


def test_unclosed_script_block():
    _, diags = parse_source("ForEach-Object {$_.Name")
    assert rule_ids(diags) == [ParseErrorId.UNEXPECTED_TOKEN]


def test_error_recovery_monotonicity():
    _, before = parse_source("}")
    _, after = parse_source("}; Get-Process")
    assert rule_ids(before) == [ParseErrorId.UNEXPECTED_TOKEN]
    assert rule_ids(after) == [ParseErrorId.UNEXPECTED_TOKEN]


def test_balanced_constructs_clean():
    for source in [
        "Get-Process",
        "$a = 5; Write-Output $a",
        "(Get-Process).Count",
        "Get-Service | Where-Object {$_.Status -eq 'Running'} | Select-Object Name",
        "$h = @{Name='x'; Value=1}",
        "@(1, 2, 3)",
        "foreach ($p in $list) { $p }",
        "Get-Process 2>&1",
        "Get-Date; Get-Host",
        "[int]$n = 3",
        'powershell.exe -c "quoted payload"',
    ]:
        _, diags = parse_source(source)
        parse_errors = [d for d in diags if d.severity is Severity.PARSE_ERROR]
        assert parse_errors == [], f"{source!r} -> {rule_ids(diags)}"


def test_determinism():
    source = "$x = (1 + 2; iex $y }"
    first = parse_source(source)
    second = parse_source(source)
    assert ast_to_json(first[0]) == ast_to_json(second[0])
    assert rule_ids(first[1]) == rule_ids(second[1])


def test_ast_spans_contain_children():
    def check(node):
        for child in node.children:
            assert child.span.start_offset >= node.span.start_offset
            assert child.span.end_offset <= node.span.end_offset
            check(child)

    ast, _ = parse_source("Get-Service | Where-Object {$_.Status -eq 'x'}; $y = (1 + 2) * 3")
    check(ast)


def test_ast_dump_is_json():
    ast, _ = parse_source("Get-Process -Name pwsh")
    obj = json.loads(ast_to_json(ast))
    assert obj["kind"] == NodeKind.SCRIPT.value


class TestHasParseError:
    def _diag(self, rule):
        span = SourceSpan(0, 1, 1, 1)
        return Diagnostic.create(rule, span, "x")

    def test_empty_false(self):
        assert has_parse_error([]) is False

    def test_unexpected_token_true(self):
        assert has_parse_error([self._diag(ParseErrorId.UNEXPECTED_TOKEN)]) is True

    def test_warning_plus_error_false(self):
        diags = [
            self._diag(RuleId.AVOID_USING_CMDLET_ALIASES),
            self._diag(RuleId.AVOID_USING_COMPUTERNAME_HARDCODED),
        ]
        assert has_parse_error(diags) is False


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=150))
def test_parse_totality_text(source):
    tokens, _ = tokenize(source)
    ast, diags = parse(tokens)  # must never raise
    assert ast.kind is NodeKind.SCRIPT
    for diag in diags:
        assert diag.severity is Severity.PARSE_ERROR


@settings(max_examples=150, deadline=None)
@given(st.binary(max_size=120))
def test_parse_totality_bytes(data):
    tokens, _ = tokenize(data.decode("latin-1"))
    ast, _ = parse(tokens)
    assert ast.kind is NodeKind.SCRIPT
