"""Lint rule engine over the token stream and AST.

Five rules with fixed severities: cmdlet aliases, Invoke-Expression
usage, WMI cmdlets, and assigned-but-unused variables as warnings, plus
hardcoded ComputerName arguments as the sole error. The alias table
ships as data and can be extended through a JSON rule configuration
without code changes.

Variable-use analysis runs over a flat per-script scope (script blocks
share the scope). References embedded in expandable strings count as
uses.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from redshell_eval.diagnostics import Diagnostic, RuleId, SourceSpan
from redshell_eval.lexer import Token, TokenKind
from redshell_eval.parser import AstNode

_WMI_CMDLETS = frozenset(
    {
        "get-wmiobject",
        "invoke-wmimethod",
        "register-wmievent",
        "remove-wmiobject",
        "set-wmiinstance",
    }
)

# Loopback values exempt from the hardcoded-ComputerName rule.
_LOOPBACK = frozenset({"localhost", ".", "::1", "127.0.0.1"})

_ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%="})

# Variables never reported by the unused-variable rule.
_AUTOMATIC_VARS = frozenset(
    """_ $ ^ ? args error event eventargs false home host input lastexitcode
    matches myinvocation nestedpromptlevel null pid profile psboundparameters
    pscmdlet pscommandpath psitem psscriptroot psversiontable pwd sender
    stacktrace this true""".split()
)

_EXPANDABLE_REF = re.compile(r"\$(?:\{([^}]+)\}|([A-Za-z_][A-Za-z0-9_]*))")


@dataclass(frozen=True)
class LintConfig:
    """Immutable rule configuration: enable flags plus the alias table."""

    enabled: dict[RuleId, bool] = field(default_factory=dict)
    aliases: dict[str, str] = field(default_factory=dict)

    def is_enabled(self, rule: RuleId) -> bool:
        return self.enabled.get(rule, True)


def default_config() -> LintConfig:
    """The packaged rule configuration (all rules on, seeded alias table)."""
    raw = resources.files("redshell_eval").joinpath("data/rules_config.json").read_text("utf-8")
    return _config_from_obj(json.loads(raw))


def _config_from_obj(obj: dict) -> LintConfig:
    enabled = {}
    for name, flag in obj.get("rules", {}).items():
        enabled[RuleId(name)] = bool(flag)
    aliases = {k.lower(): v for k, v in obj.get("aliases", {}).items()}
    return LintConfig(enabled=enabled, aliases=aliases)


def load_config(path: str | Path) -> LintConfig:
    """Load a rule configuration file, merged over the packaged defaults."""
    base = default_config()
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    override = _config_from_obj(obj)
    enabled = dict(base.enabled)
    enabled.update(override.enabled)
    aliases = dict(base.aliases)
    aliases.update(override.aliases)
    return LintConfig(enabled=enabled, aliases=aliases)


def _variable_name(lexeme: str) -> str:
    name = lexeme[1:]
    if name.startswith("{") and name.endswith("}"):
        name = name[1:-1]
    return name.lower()


def _unquote(lexeme: str) -> str:
    if len(lexeme) >= 2 and lexeme[0] == lexeme[-1] and lexeme[0] in "'\"":
        return lexeme[1:-1]
    return lexeme


def _command_rules(tokens: list[Token], config: LintConfig, out: list[Diagnostic]) -> None:
    for tok in tokens:
        if tok.kind is not TokenKind.COMMAND_NAME:
            continue
        name = tok.lexeme.lower()
        canonical = config.aliases.get(name)
        if canonical is not None and config.is_enabled(RuleId.AVOID_USING_CMDLET_ALIASES):
            out.append(
                Diagnostic.create(
                    RuleId.AVOID_USING_CMDLET_ALIASES,
                    tok.span,
                    f"'{tok.lexeme}' is an alias of '{canonical}'; "
                    "aliases make scripts harder to read and maintain",
                )
            )
        resolved = (canonical or tok.lexeme).lower()
        if resolved == "invoke-expression" and config.is_enabled(
            RuleId.AVOID_USING_INVOKE_EXPRESSION
        ):
            out.append(
                Diagnostic.create(
                    RuleId.AVOID_USING_INVOKE_EXPRESSION,
                    tok.span,
                    "Invoke-Expression executes arbitrary code from strings "
                    "and should be avoided",
                )
            )
        if resolved in _WMI_CMDLETS and config.is_enabled(RuleId.AVOID_USING_WMI_CMDLET):
            out.append(
                Diagnostic.create(
                    RuleId.AVOID_USING_WMI_CMDLET,
                    tok.span,
                    f"'{tok.lexeme}' is a WMI cmdlet; prefer the CIM equivalents",
                )
            )


def _unused_vars_rule(tokens: list[Token], config: LintConfig, out: list[Diagnostic]) -> None:
    if not config.is_enabled(RuleId.USE_DECLARED_VARS_MORE_THAN_ASSIGNMENTS):
        return
    assignments: dict[str, SourceSpan] = {}
    display: dict[str, str] = {}
    uses: set[str] = set()
    for i, tok in enumerate(tokens):
        if tok.kind is TokenKind.VARIABLE:
            name = _variable_name(tok.lexeme)
            if not name or name in _AUTOMATIC_VARS or ":" in name:
                continue
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt is not None and nxt.kind is TokenKind.OPERATOR and nxt.lexeme in _ASSIGN_OPS:
                assignments.setdefault(name, tok.span)
                display.setdefault(name, tok.lexeme)
            else:
                uses.add(name)
        elif tok.kind in (TokenKind.STRING_LITERAL, TokenKind.HERE_STRING):
            if tok.lexeme.startswith(("'", "@'")):
                continue  # literal strings do not expand
            for match in _EXPANDABLE_REF.finditer(tok.lexeme):
                uses.add((match.group(1) or match.group(2)).lower())
    for name, span in assignments.items():
        if name not in uses:
            out.append(
                Diagnostic.create(
                    RuleId.USE_DECLARED_VARS_MORE_THAN_ASSIGNMENTS,
                    span,
                    f"variable '{display[name]}' is assigned but never used",
                )
            )


def _computername_rule(tokens: list[Token], config: LintConfig, out: list[Diagnostic]) -> None:
    if not config.is_enabled(RuleId.AVOID_USING_COMPUTERNAME_HARDCODED):
        return
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.PARAMETER or tok.lexeme[1:].lower() != "computername":
            continue
        value = tokens[i + 1] if i + 1 < len(tokens) else None
        if value is None:
            continue
        if value.kind is TokenKind.STRING_LITERAL:
            literal = _unquote(value.lexeme)
        elif value.kind in (TokenKind.UNKNOWN, TokenKind.NUMBER):
            literal = value.lexeme
        else:
            continue  # variable, subexpression, next parameter, ...
        if literal.lower() in _LOOPBACK:
            continue
        out.append(
            Diagnostic.create(
                RuleId.AVOID_USING_COMPUTERNAME_HARDCODED,
                tok.span,
                "the ComputerName argument is hardcoded; this may expose "
                "information about the target host",
            )
        )


def analyze(
    ast: AstNode, tokens: list[Token], config: LintConfig | None = None
) -> list[Diagnostic]:
    """Run every enabled rule; diagnostics come back sorted by span start.

    Multiple rules may fire on one construct, but a single rule fires at
    most once per offending span.
    """
    if config is None:
        config = default_config()
    out: list[Diagnostic] = []
    _command_rules(tokens, config, out)
    _unused_vars_rule(tokens, config, out)
    _computername_rule(tokens, config, out)
    out.sort(key=lambda d: (d.span.start_offset, d.rule.value))
    return out
