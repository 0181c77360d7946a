"""Shared diagnostic types: source spans, severities, rule identifiers.

Severity is a fixed function of the rule: parse-error classes always carry
ParseError severity, lint rules carry their registered severity. The
constructor enforces that mapping so a diagnostic can never disagree with
its rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range plus 1-based line/column of its start."""

    start_offset: int
    end_offset: int
    line: int
    column: int

    def __post_init__(self):
        if self.start_offset > self.end_offset:
            raise ValueError(f"span start {self.start_offset} after end {self.end_offset}")
        if self.line < 1 or self.column < 1:
            raise ValueError("line and column are 1-based")


class Severity(Enum):
    PARSE_ERROR = "parse_error"
    ERROR = "error"
    WARNING = "warning"


class ParseErrorId(Enum):
    """Parse-error classes emitted by the lexer and parser."""

    UNEXPECTED_TOKEN = "UnexpectedToken"
    MISSING_END_PARENTHESIS_IN_EXPRESSION = "MissingEndParenthesisInExpression"
    MISSING_END_PARENTHESIS_IN_METHOD_CALL = "MissingEndParenthesisInMethodCall"
    UNEXPECTED_CHARACTERS_AFTER_HERESTRING_HEADER = "UnexpectedCharactersAfterHereStringHeader"


class RuleId(Enum):
    """Lint rules shipped with the analyzer."""

    AVOID_USING_CMDLET_ALIASES = "PSAvoidUsingCmdletAliases"
    AVOID_USING_INVOKE_EXPRESSION = "PSAvoidUsingInvokeExpression"
    USE_DECLARED_VARS_MORE_THAN_ASSIGNMENTS = "PSUseDeclaredVarsMoreThanAssignments"
    AVOID_USING_WMI_CMDLET = "PSAvoidUsingWMICmdlet"
    AVOID_USING_COMPUTERNAME_HARDCODED = "PSAvoidUsingComputerNameHardcoded"


# Fixed severity per rule; PSAvoidUsingComputerNameHardcoded is the sole Error.
_SEVERITIES: dict[ParseErrorId | RuleId, Severity] = {
    **{pid: Severity.PARSE_ERROR for pid in ParseErrorId},
    RuleId.AVOID_USING_CMDLET_ALIASES: Severity.WARNING,
    RuleId.AVOID_USING_INVOKE_EXPRESSION: Severity.WARNING,
    RuleId.USE_DECLARED_VARS_MORE_THAN_ASSIGNMENTS: Severity.WARNING,
    RuleId.AVOID_USING_WMI_CMDLET: Severity.WARNING,
    RuleId.AVOID_USING_COMPUTERNAME_HARDCODED: Severity.ERROR,
}


def severity_for(rule: ParseErrorId | RuleId) -> Severity:
    """Return the fixed severity registered for a rule."""
    return _SEVERITIES[rule]


@dataclass(frozen=True)
class Diagnostic:
    """One analyzer finding: rule id, severity, source span, message."""

    rule: ParseErrorId | RuleId
    severity: Severity
    span: SourceSpan
    message: str

    def __post_init__(self):
        expected = severity_for(self.rule)
        if self.severity is not expected:
            raise ValueError(f"{self.rule.value} must carry severity {expected.value}")

    @classmethod
    def create(cls, rule: ParseErrorId | RuleId, span: SourceSpan, message: str) -> "Diagnostic":
        """Build a diagnostic with the severity implied by the rule."""
        return cls(rule=rule, severity=severity_for(rule), span=span, message=message)

    def to_json_obj(self) -> dict:
        """Wire form used by the diagnostics JSONL output."""
        return {
            "rule": self.rule.value,
            "severity": self.severity.value,
            "line": self.span.line,
            "column": self.span.column,
            "message": self.message,
        }
