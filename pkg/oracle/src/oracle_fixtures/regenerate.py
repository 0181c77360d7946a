"""Regenerate the golden metric fixture file.

Expected scores are obtained by running the evaluation CLI's ``score``
subcommand over the pair file (its public JSONL interface); reference
scores come from the vendored scorers. The output is deterministic and
byte-stable: keys sorted, values rounded to 6 decimals, one trailing
newline. A per-metric divergence summary between the two score sets is
printed; for ED, ROUGE-L, BLEU-4 and Exact-Match the expected ceiling is
1e-6, while METEOR divergence is reported only (the vendored aligner
keeps the cited scorer's lowercasing and end-first scan, and its synonym
stage is disabled).
"""

from __future__ import annotations

import argparse
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from oracle_fixtures import __version__
from oracle_fixtures.scorers import SCORER_VERSIONS, reference_scores

METRICS = ("ed", "meteor", "rouge_l", "bleu4", "exact_match")


class RegenerationError(Exception):
    pass


def _read_pairs(path: Path) -> list[dict]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RegenerationError(f"{path}: line {line_no}: invalid JSON ({exc.msg})")
            for key in ("pair_id", "reference", "generated"):
                if key not in obj:
                    raise RegenerationError(f"{path}: line {line_no}: missing {key!r}")
            pairs.append(obj)
    if not pairs:
        raise RegenerationError(f"{path}: no pairs found")
    return pairs


def _expected_scores(pairs_path: Path, score_command: list[str]) -> dict[str, dict]:
    if shutil.which(score_command[0]) is None:
        raise RegenerationError(
            f"scorer dependency missing: {score_command[0]!r} not on PATH "
            "(install the evaluation package first)"
        )
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "scores.jsonl"
        proc = subprocess.run(
            [*score_command, "score", "--pairs", str(pairs_path), "--out", str(out)],
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            raise RegenerationError(f"score command failed: {proc.stderr.strip()}")
        scores = {}
        for line in out.read_text(encoding="utf-8").splitlines():
            row = json.loads(line)
            scores[row["sample_id"]] = {metric: row[metric] for metric in METRICS}
    return scores


def regenerate(
    pairs_path: str | Path,
    out_path: str | Path,
    score_command: list[str] | None = None,
) -> dict[str, float]:
    """Write the golden fixture file; returns per-metric max divergence."""
    pairs_path = Path(pairs_path)
    out_path = Path(out_path)
    pairs = _read_pairs(pairs_path)
    expected = _expected_scores(pairs_path, score_command or ["redshell-eval"])

    golden_pairs = []
    max_divergence = {metric: 0.0 for metric in METRICS}
    meteor_total = 0.0
    for pair in pairs:
        pid = pair["pair_id"]
        if pid not in expected:
            raise RegenerationError(f"score output is missing pair {pid!r}")
        ref_scores = {
            metric: round(value, 6)
            for metric, value in reference_scores(pair["reference"], pair["generated"]).items()
        }
        for metric in METRICS:
            delta = abs(expected[pid][metric] - ref_scores[metric])
            max_divergence[metric] = max(max_divergence[metric], delta)
        meteor_total += abs(expected[pid]["meteor"] - ref_scores["meteor"])
        golden_pairs.append(
            {
                "pair_id": pid,
                "reference": pair["reference"],
                "generated": pair["generated"],
                "expected": expected[pid],
                "reference_impl_scores": ref_scores,
            }
        )

    golden = {
        "header": {
            "generator_version": f"oracle-fixtures-{__version__}",
            "scorer_versions": SCORER_VERSIONS,
            "pair_count": len(golden_pairs),
        },
        "pairs": golden_pairs,
    }
    out_path.write_text(
        json.dumps(golden, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )

    report = dict(max_divergence)
    report["meteor_mean_abs"] = meteor_total / len(golden_pairs)
    return report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", required=True, help="pair JSONL file")
    parser.add_argument("--out", required=True, help="golden fixture output path")
    parser.add_argument(
        "--score-cmd",
        default="redshell-eval",
        help="evaluation CLI executable used for expected scores",
    )
    args = parser.parse_args()
    try:
        divergence = regenerate(args.pairs, args.out, [args.score_cmd])
    except (RegenerationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
    for metric in METRICS:
        print(f"max |expected - reference_impl| {metric}: {divergence[metric]:.2e}")
    print(f"mean |expected - reference_impl| meteor: {divergence['meteor_mean_abs']:.2e}")


if __name__ == "__main__":
    main()
