"""Figure rendering for evaluation reports.

Renders the report's triage percentages, rule histogram, and mean
scores as PNG bar charts next to the delimited outputs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from redshell_eval.report import _SCORE_COLUMNS, _SCORE_LABELS, EvaluationReport


def render_figures(report: EvaluationReport, out_dir: str | Path) -> list[Path]:
    """Write triage, histogram, and mean-score charts; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(6, 3.2))
    categories = ["Parse Errors", "Warnings", "Errors"]
    values = [
        report.triage.parse_error_pct,
        report.triage.warning_pct,
        report.triage.error_pct,
    ]
    bars = ax.bar(categories, values, color=["#c0504d", "#f1c232", "#4472c4"])
    ax.bar_label(bars, fmt="%.2f")
    ax.set_ylabel("Percentage (%)")
    ax.set_title(f"Syntactic triage: {report.manifest.model_name}")
    ax.set_ylim(0, max(values + [1.0]) * 1.25)
    fig.tight_layout()
    path = out / "triage_percentages.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    if report.rule_histogram:
        entries = sorted(report.rule_histogram.items(), key=lambda kv: (kv[1], kv[0]))
        labels = [rule for rule, _ in entries]
        counts = [count for _, count in entries]
        fig, ax = plt.subplots(figsize=(8, 0.45 * len(entries) + 1.6))
        bars = ax.barh(labels, counts, color="#4472c4")
        ax.bar_label(bars)
        ax.set_xlabel("Number of occurrences")
        ax.set_title("Diagnostic occurrences by rule")
        fig.tight_layout()
        path = out / "rule_histogram.png"
        fig.savefig(path)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(6, 3.2))
    means = report.mean_scores.to_json_obj(ndigits=None)
    labels = [_SCORE_LABELS[c] for c in _SCORE_COLUMNS]
    values = [means[c] for c in _SCORE_COLUMNS]
    bars = ax.bar(labels, values, color="#6aa84f")
    ax.bar_label(bars, fmt="%.4f")
    ax.set_ylabel("Score")
    ax.set_ylim(0, 1.05)
    ax.set_title(f"Mean similarity scores: {report.manifest.model_name}")
    fig.tight_layout()
    path = out / "mean_scores.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    return written
