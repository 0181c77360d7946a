from __future__ import annotations

import json

import pytest

from redshell_eval.corpus import CorpusSample
from redshell_eval.diagnostics import Diagnostic, ParseErrorId, RuleId, Severity, SourceSpan
from redshell_eval.exceptions import ReportAssemblyError
from redshell_eval.metrics import MetricConfig, MetricScores
from redshell_eval.report import (
    EvaluationReport,
    ReportFormat,
    RunManifest,
    build_report,
    render,
)
from redshell_eval.triage import TriagePercentages

SPAN = SourceSpan(0, 3, 1, 1)


def manifest(**kw):
    defaults = dict(
        model_name="unit-model",
        dataset_id="unit-corpus",
        split_seed=7,
        train_fraction=0.9,
        epochs=20,
        context_prompt="generate one line",
    )
    defaults.update(kw)
    return RunManifest(**defaults)


def sample(n):
    return CorpusSample(id=f"s{n}", description=f"d{n}", snippet=f"Get-Item {n}")


def ones():
    return MetricScores(1.0, 1.0, 1.0, 1.0, 1.0)


def zeros():
    return MetricScores(0.0, 0.0, 0.0, 0.0, 0.0)


def diag(rule):
    return Diagnostic.create(rule, SPAN, "msg")


def simple_report():
    samples = [sample(1), sample(2)]
    generated = {"s1": "Get-Item 1", "s2": "nope"}
    diagnostics = {
        "s1": [],
        "s2": [diag(RuleId.AVOID_USING_CMDLET_ALIASES), diag(ParseErrorId.UNEXPECTED_TOKEN)],
    }
    scores = {"s1": ones(), "s2": zeros()}
    return build_report(manifest(), samples, generated, diagnostics, scores)


class TestBuildReport:
    def test_histogram_reproduces_fixed_counts(self):
        fixture = {
            RuleId.AVOID_USING_CMDLET_ALIASES: 13,
            RuleId.AVOID_USING_INVOKE_EXPRESSION: 13,
            RuleId.USE_DECLARED_VARS_MORE_THAN_ASSIGNMENTS: 6,
            RuleId.AVOID_USING_WMI_CMDLET: 5,
            RuleId.AVOID_USING_COMPUTERNAME_HARDCODED: 2,
            ParseErrorId.UNEXPECTED_TOKEN: 3,
            ParseErrorId.MISSING_END_PARENTHESIS_IN_METHOD_CALL: 1,
            ParseErrorId.MISSING_END_PARENTHESIS_IN_EXPRESSION: 1,
            ParseErrorId.UNEXPECTED_CHARACTERS_AFTER_HERESTRING_HEADER: 1,
        }
        diags = []
        for rule, count in fixture.items():
            diags.extend(diag(rule) for _ in range(count))
        samples = [sample(1)]
        report = build_report(
            manifest(), samples, {"s1": "x"}, {"s1": diags}, {"s1": zeros()}
        )
        assert report.rule_histogram == {
            "PSAvoidUsingCmdletAliases": 13,
            "PSAvoidUsingInvokeExpression": 13,
            "PSUseDeclaredVarsMoreThanAssignments": 6,
            "PSAvoidUsingWMICmdlet": 5,
            "PSAvoidUsingComputerNameHardcoded": 2,
            "UnexpectedToken": 3,
            "MissingEndParenthesisInMethodCall": 1,
            "MissingEndParenthesisInExpression": 1,
            "UnexpectedCharactersAfterHereStringHeader": 1,
        }

    def test_mean_of_ones_and_zeros(self):
        report = simple_report()
        assert report.mean_scores == MetricScores(0.5, 0.5, 0.5, 0.5, 0.5)

    def test_key_mismatch_names_offenders(self):
        samples = [sample(1), sample(2)]
        with pytest.raises(ReportAssemblyError, match="s2"):
            build_report(
                manifest(),
                samples,
                {"s1": "x"},
                {"s1": [], "s2": []},
                {"s1": zeros(), "s2": zeros()},
            )
        with pytest.raises(ReportAssemblyError, match="s3"):
            build_report(
                manifest(),
                samples,
                {"s1": "x", "s2": "y", "s3": "z"},
                {"s1": [], "s2": []},
                {"s1": zeros(), "s2": zeros()},
            )

    def test_per_sample_count_and_triage(self):
        report = simple_report()
        assert len(report.per_sample) == 2
        # parse error present -> parse error only
        assert report.per_sample[1].categories == {Severity.PARSE_ERROR}
        assert report.triage.n_total == 2
        assert report.triage.n_no_parse_error == 1

    def test_histogram_total_equals_diagnostic_count(self):
        report = simple_report()
        assert sum(report.rule_histogram.values()) == sum(
            len(r.diagnostics) for r in report.per_sample
        )


class TestRender:
    def test_json_round_trip(self):
        report = simple_report()
        text = render(report, ReportFormat.JSON)
        parsed = EvaluationReport.from_json_obj(json.loads(text))
        assert parsed == report

    def test_json_render_is_deterministic(self):
        a = render(simple_report(), ReportFormat.JSON)
        b = render(simple_report(), ReportFormat.JSON)
        assert a == b

    def _display_report(self):
        base = simple_report()
        return EvaluationReport(
            manifest=base.manifest,
            per_sample=base.per_sample,
            triage=TriagePercentages(
                parse_error_pct=100.0 * 3 / 113,  # 2.6548...
                warning_pct=100.0 * 31 / 110,
                error_pct=100.0 * 2 / 110,
                n_total=113,
                n_no_parse_error=110,
            ),
            rule_histogram=base.rule_histogram,
            mean_scores=MetricScores(0.56134, 0.5, 0.5, 0.5, 0.5),
        )

    def test_percentage_display_rounding(self):
        text = render(self._display_report(), ReportFormat.MARKDOWN)
        assert "| Parse Errors | 2.65 |" in text
        assert "| Warnings | 28.18 |" in text
        assert "| Errors | 1.82 |" in text

    def test_score_display_rounding(self):
        text = render(self._display_report(), ReportFormat.MARKDOWN)
        assert "| ED | 0.5613 |" in text

    def test_csv_has_sample_rows_and_summary(self):
        text = render(simple_report(), ReportFormat.CSV)
        lines = text.splitlines()
        assert lines[0].startswith("sample_id,")
        assert any(line.startswith("s1,") for line in lines)
        assert any(line.startswith("mean_ed,") for line in lines)
        assert any(line.startswith("parse_error_pct,") for line in lines)

    def test_markdown_contains_tables(self):
        text = render(simple_report(), ReportFormat.MARKDOWN)
        assert "| Category | Percentage (%) |" in text
        assert "| Metric | Score |" in text


class TestManifest:
    def test_round_trip(self):
        m = manifest(metric_config=MetricConfig(rouge_beta=1.5))
        again = RunManifest.from_json_obj(m.to_json_obj())
        assert again == m

    def test_recorded_training_parameters(self):
        m = manifest()
        assert (m.lora_rank, m.lora_alpha, m.lora_dropout) == (64, 64, 0.0)
        assert (m.batch_size, m.learning_rate) == (8, 2e-4)

    def test_reference_manifest_fixture_loads(self, fixtures_dir):
        with open(fixtures_dir / "reference_manifest.json", encoding="utf-8") as fh:
            m = RunManifest.from_json_obj(json.load(fh))
        assert m.epochs == 20
        assert m.train_fraction == 0.9
        assert "single line" in m.context_prompt


def test_figures_render(tmp_path):
    from redshell_eval.figures import render_figures

    paths = render_figures(simple_report(), tmp_path)
    assert [p.name for p in paths] == [
        "triage_percentages.png",
        "rule_histogram.png",
        "mean_scores.png",
    ]
    for path in paths:
        assert path.stat().st_size > 0
