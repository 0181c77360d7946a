"""Evaluation report assembly and rendering.

A report bundles the run manifest, per-sample triage/scores/diagnostics,
corpus-level triage percentages, the per-rule diagnostic histogram, and
mean scores. Rendering is a pure function of the report: JSON is
schema-stable with sorted keys and full float precision (so a rendered
report parses back equal), CSV carries one row per sample plus a summary
block, and Markdown shows display-rounded tables (percentages to 2
decimals, scores to 4).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum

from redshell_eval.corpus import CorpusSample
from redshell_eval.diagnostics import Diagnostic, ParseErrorId, RuleId, Severity, SourceSpan
from redshell_eval.exceptions import ReportAssemblyError, ValidationError
from redshell_eval.metrics import MetricConfig, MetricScores, aggregate
from redshell_eval.triage import TriagePercentages, TriageResult, triage_percentages, triage_sample


@dataclass(frozen=True)
class RunManifest:
    """Configuration record that makes a report reproducible.

    The adapter/training fields are record-only: they document how the
    evaluated model was produced and carry no behavior here.
    """

    model_name: str
    dataset_id: str
    split_seed: int
    train_fraction: float
    epochs: int
    lora_rank: int = 64
    lora_alpha: int = 64
    lora_dropout: float = 0.0
    batch_size: int = 8
    learning_rate: float = 2e-4
    context_prompt: str = ""
    metric_config: MetricConfig = field(default_factory=MetricConfig)

    def to_json_obj(self) -> dict:
        return {
            "model_name": self.model_name,
            "dataset_id": self.dataset_id,
            "split_seed": self.split_seed,
            "train_fraction": self.train_fraction,
            "epochs": self.epochs,
            "lora_rank": self.lora_rank,
            "lora_alpha": self.lora_alpha,
            "lora_dropout": self.lora_dropout,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "context_prompt": self.context_prompt,
            "metric_config": self.metric_config.to_json_obj(),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RunManifest":
        return cls(
            model_name=obj["model_name"],
            dataset_id=obj["dataset_id"],
            split_seed=obj["split_seed"],
            train_fraction=obj["train_fraction"],
            epochs=obj["epochs"],
            lora_rank=obj.get("lora_rank", 64),
            lora_alpha=obj.get("lora_alpha", 64),
            lora_dropout=obj.get("lora_dropout", 0.0),
            batch_size=obj.get("batch_size", 8),
            learning_rate=obj.get("learning_rate", 2e-4),
            context_prompt=obj.get("context_prompt", ""),
            metric_config=MetricConfig.from_json_obj(obj.get("metric_config", {})),
        )


def _rule_from_name(name: str) -> ParseErrorId | RuleId:
    try:
        return ParseErrorId(name)
    except ValueError:
        return RuleId(name)


def _diagnostic_to_obj(diag: Diagnostic) -> dict:
    obj = diag.to_json_obj()
    obj["span"] = [diag.span.start_offset, diag.span.end_offset]
    return obj


def _diagnostic_from_obj(obj: dict) -> Diagnostic:
    start, end = obj["span"]
    return Diagnostic.create(
        _rule_from_name(obj["rule"]),
        SourceSpan(start, end, obj["line"], obj["column"]),
        obj["message"],
    )


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    categories: frozenset[Severity]
    scores: MetricScores
    diagnostics: tuple[Diagnostic, ...]

    def to_json_obj(self) -> dict:
        order = [Severity.PARSE_ERROR, Severity.WARNING, Severity.ERROR]
        return {
            "sample_id": self.sample_id,
            "categories": [s.value for s in order if s in self.categories],
            "scores": self.scores.to_json_obj(ndigits=None),
            "diagnostics": [_diagnostic_to_obj(d) for d in self.diagnostics],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SampleRecord":
        return cls(
            sample_id=obj["sample_id"],
            categories=frozenset(Severity(v) for v in obj["categories"]),
            scores=MetricScores.from_json_obj(obj["scores"]),
            diagnostics=tuple(_diagnostic_from_obj(d) for d in obj["diagnostics"]),
        )


@dataclass(frozen=True)
class EvaluationReport:
    manifest: RunManifest
    per_sample: tuple[SampleRecord, ...]
    triage: TriagePercentages
    rule_histogram: dict[str, int]
    mean_scores: MetricScores

    def to_json_obj(self) -> dict:
        return {
            "manifest": self.manifest.to_json_obj(),
            "per_sample": [r.to_json_obj() for r in self.per_sample],
            "triage_percentages": self.triage.to_json_obj(),
            "rule_histogram": dict(sorted(self.rule_histogram.items())),
            "mean_scores": self.mean_scores.to_json_obj(ndigits=None),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EvaluationReport":
        tp = obj["triage_percentages"]
        return cls(
            manifest=RunManifest.from_json_obj(obj["manifest"]),
            per_sample=tuple(SampleRecord.from_json_obj(r) for r in obj["per_sample"]),
            triage=TriagePercentages(
                parse_error_pct=tp["parse_error_pct"],
                warning_pct=tp["warning_pct"],
                error_pct=tp["error_pct"],
                n_total=tp["n_total"],
                n_no_parse_error=tp["n_no_parse_error"],
            ),
            rule_histogram=dict(obj["rule_histogram"]),
            mean_scores=MetricScores.from_json_obj(obj["mean_scores"]),
        )


def build_report(
    manifest: RunManifest,
    samples: list[CorpusSample],
    generated: dict[str, str],
    all_diagnostics: dict[str, list[Diagnostic]],
    all_scores: dict[str, MetricScores],
) -> EvaluationReport:
    """Assemble a report from aligned per-sample inputs.

    Inputs are keyed by sample id; a key mismatch raises naming the
    offending ids.
    """
    sample_ids = [s.id for s in samples]
    wanted = set(sample_ids)
    for name, keys in (
        ("generated", set(generated)),
        ("diagnostics", set(all_diagnostics)),
        ("scores", set(all_scores)),
    ):
        if keys != wanted:
            missing = sorted(wanted - keys)
            extra = sorted(keys - wanted)
            detail = []
            if missing:
                detail.append(f"missing {missing}")
            if extra:
                detail.append(f"unknown {extra}")
            raise ReportAssemblyError(f"{name} ids do not match samples: " + "; ".join(detail))

    records: list[SampleRecord] = []
    histogram: dict[str, int] = {}
    triage_results: list[TriageResult] = []
    for sid in sample_ids:
        diags = list(all_diagnostics[sid])
        result = triage_sample(diags, sample_id=sid)
        triage_results.append(result)
        for diag in diags:
            histogram[diag.rule.value] = histogram.get(diag.rule.value, 0) + 1
        records.append(
            SampleRecord(
                sample_id=sid,
                categories=result.categories,
                scores=all_scores[sid],
                diagnostics=tuple(diags),
            )
        )
    return EvaluationReport(
        manifest=manifest,
        per_sample=tuple(records),
        triage=triage_percentages(triage_results),
        rule_histogram=histogram,
        mean_scores=aggregate([all_scores[sid] for sid in sample_ids]),
    )


class ReportFormat(Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "md"


_SCORE_COLUMNS = ("ed", "meteor", "rouge_l", "bleu4", "exact_match")
_SCORE_LABELS = {
    "ed": "ED",
    "meteor": "METEOR",
    "rouge_l": "ROUGE-L",
    "bleu4": "BLEU-4",
    "exact_match": "Exact Match",
}


def _render_csv(report: EvaluationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sample_id", "categories", *_SCORE_COLUMNS, "n_diagnostics"])
    for record in report.per_sample:
        scores = record.scores.to_json_obj(ndigits=6)
        order = [Severity.PARSE_ERROR, Severity.WARNING, Severity.ERROR]
        cats = "|".join(s.value for s in order if s in record.categories)
        writer.writerow(
            [record.sample_id, cats]
            + [f"{scores[c]:.6f}" for c in _SCORE_COLUMNS]
            + [len(record.diagnostics)]
        )
    writer.writerow([])
    writer.writerow(["summary", "value"])
    writer.writerow(["n_total", report.triage.n_total])
    writer.writerow(["n_no_parse_error", report.triage.n_no_parse_error])
    writer.writerow(["parse_error_pct", f"{report.triage.parse_error_pct:.2f}"])
    writer.writerow(["warning_pct", f"{report.triage.warning_pct:.2f}"])
    writer.writerow(["error_pct", f"{report.triage.error_pct:.2f}"])
    means = report.mean_scores.to_json_obj(ndigits=None)
    for column in _SCORE_COLUMNS:
        writer.writerow([f"mean_{column}", f"{means[column]:.4f}"])
    for rule, count in sorted(report.rule_histogram.items()):
        writer.writerow([f"rule_{rule}", count])
    return buf.getvalue()


def _render_markdown(report: EvaluationReport) -> str:
    lines: list[str] = []
    lines.append(f"# Evaluation report: {report.manifest.model_name}")
    lines.append("")
    lines.append(f"Dataset `{report.manifest.dataset_id}`, split seed "
                 f"{report.manifest.split_seed}, {report.triage.n_total} samples.")
    lines.append("")
    lines.append("## Syntactic triage")
    lines.append("")
    lines.append("| Category | Percentage (%) |")
    lines.append("| --- | --- |")
    lines.append(f"| Parse Errors | {report.triage.parse_error_pct:.2f} |")
    lines.append(f"| Warnings | {report.triage.warning_pct:.2f} |")
    lines.append(f"| Errors | {report.triage.error_pct:.2f} |")
    lines.append("")
    lines.append("## Mean similarity scores")
    lines.append("")
    lines.append("| Metric | Score |")
    lines.append("| --- | --- |")
    means = report.mean_scores.to_json_obj(ndigits=None)
    for column in _SCORE_COLUMNS:
        lines.append(f"| {_SCORE_LABELS[column]} | {means[column]:.4f} |")
    lines.append("")
    if report.rule_histogram:
        lines.append("## Diagnostic occurrences")
        lines.append("")
        lines.append("| Rule | Count |")
        lines.append("| --- | --- |")
        for rule, count in sorted(
            report.rule_histogram.items(), key=lambda kv: (-kv[1], kv[0])
        ):
            lines.append(f"| {rule} | {count} |")
        lines.append("")
    return "\n".join(lines)


def render(report: EvaluationReport, fmt: ReportFormat) -> str:
    """Render a report; byte-identical for identical reports."""
    if fmt is ReportFormat.JSON:
        return json.dumps(report.to_json_obj(), sort_keys=True, indent=2) + "\n"
    if fmt is ReportFormat.CSV:
        return _render_csv(report)
    if fmt is ReportFormat.MARKDOWN:
        return _render_markdown(report)
    raise ValidationError(f"unsupported report format: {fmt!r}")
