"""Evaluation harness for LLM-generated PowerShell one-liners.

Provides corpus management, a tolerant PowerShell lexer/parser, a small
lint rule engine, sample triage, five output-similarity metrics, a
chat-completions client, and aggregate reporting.
"""

__version__ = "0.1.0"

from redshell_eval.corpus import CorpusSample, TacticId, load_corpus, split_corpus, tactic_coverage
from redshell_eval.diagnostics import Diagnostic, Severity
from redshell_eval.lexer import tokenize
from redshell_eval.parser import has_parse_error, parse
from redshell_eval.lint import analyze
from redshell_eval.triage import TriageResult, triage_percentages, triage_sample
from redshell_eval.metrics import MetricConfig, MetricScores, aggregate, score_pair

__all__ = [
    "CorpusSample",
    "TacticId",
    "load_corpus",
    "split_corpus",
    "tactic_coverage",
    "Diagnostic",
    "Severity",
    "tokenize",
    "parse",
    "has_parse_error",
    "analyze",
    "TriageResult",
    "triage_sample",
    "triage_percentages",
    "MetricConfig",
    "MetricScores",
    "score_pair",
    "aggregate",
]
