"""Per-sample category triage and corpus-level percentages.

A sample with one or more parse errors is categorized as ParseError
only, regardless of any warnings or errors it also carries. Samples
without parse errors are categorized Warning and/or Error if at least
one diagnostic of that severity is present. Percentages use n_total as
the parse-error denominator and the no-parse-error count for warnings
and errors; both denominators are carried so either convention can be
recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass

from redshell_eval.diagnostics import Diagnostic, Severity
from redshell_eval.exceptions import ValidationError


@dataclass(frozen=True)
class TriageResult:
    """Category set assigned to one generated sample."""

    sample_id: str
    categories: frozenset[Severity]

    def to_json_obj(self) -> dict:
        order = [Severity.PARSE_ERROR, Severity.WARNING, Severity.ERROR]
        return {
            "sample_id": self.sample_id,
            "categories": [s.value for s in order if s in self.categories],
        }


@dataclass(frozen=True)
class TriagePercentages:
    parse_error_pct: float
    warning_pct: float
    error_pct: float
    n_total: int
    n_no_parse_error: int

    def to_json_obj(self) -> dict:
        return {
            "parse_error_pct": self.parse_error_pct,
            "warning_pct": self.warning_pct,
            "error_pct": self.error_pct,
            "n_total": self.n_total,
            "n_no_parse_error": self.n_no_parse_error,
        }


def triage_sample(diagnostics: list[Diagnostic], sample_id: str = "") -> TriageResult:
    """Categorize one sample from the severities of its diagnostics."""
    severities = {d.severity for d in diagnostics}
    if Severity.PARSE_ERROR in severities:
        categories = frozenset({Severity.PARSE_ERROR})
    else:
        categories = frozenset(severities & {Severity.WARNING, Severity.ERROR})
    return TriageResult(sample_id=sample_id, categories=categories)


def triage_percentages(results: list[TriageResult]) -> TriagePercentages:
    """Corpus-level percentages; full precision, rounding happens on display."""
    if not results:
        raise ValidationError("cannot compute percentages over zero samples")
    n_total = len(results)
    n_parse_error = sum(1 for r in results if Severity.PARSE_ERROR in r.categories)
    n_no_parse_error = n_total - n_parse_error
    n_warning = sum(1 for r in results if Severity.WARNING in r.categories)
    n_error = sum(1 for r in results if Severity.ERROR in r.categories)
    return TriagePercentages(
        parse_error_pct=100.0 * n_parse_error / n_total,
        warning_pct=100.0 * n_warning / n_no_parse_error if n_no_parse_error else 0.0,
        error_pct=100.0 * n_error / n_no_parse_error if n_no_parse_error else 0.0,
        n_total=n_total,
        n_no_parse_error=n_no_parse_error,
    )
