"""Command-line interface.

Subcommands: ``corpus validate|split|coverage``, ``lint``, ``score``,
``generate``, ``evaluate`` (split-test -> generate -> lint -> triage ->
score -> report), and ``report``.

Exit codes: 0 success, 1 validation/domain error, 2 I/O error,
3 remote-endpoint failure. Lint findings are data, not failures; the
opt-in ``--fail-on parse-error`` flag gates CI runs. All randomness
flows from ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from redshell_eval import __version__
from redshell_eval.corpus import (
    assignments_for,
    load_corpus,
    save_assignments,
    split_corpus,
    tactic_coverage,
)
from redshell_eval.exceptions import (
    GenerationError,
    RedshellError,
    ValidationError,
)
from redshell_eval.genclient import GenerationConfig, batch_generate
from redshell_eval.lexer import tokenize
from redshell_eval.lint import LintConfig, analyze, default_config, load_config
from redshell_eval.metrics import MetricConfig, MetricScores, score_pair
from redshell_eval.parser import has_parse_error, parse
from redshell_eval.report import (
    EvaluationReport,
    ReportFormat,
    RunManifest,
    build_report,
    render,
)
from redshell_eval.triage import triage_sample

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_ENDPOINT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(Path(out), text)
    else:
        sys.stdout.write(text)


def _jsonl(objs) -> str:
    return "".join(json.dumps(o, ensure_ascii=False) + "\n" for o in objs)


def _lint_config(path: str | None) -> LintConfig:
    return load_config(path) if path else default_config()


def _analyze_snippet(snippet: str, config: LintConfig):
    tokens, lex_diags = tokenize(snippet)
    ast, parse_diags = parse(tokens)
    lint_diags = analyze(ast, tokens, config)
    diags = lex_diags + parse_diags + lint_diags
    diags.sort(key=lambda d: (d.span.start_offset, d.rule.value))
    return diags


def _read_keyed_jsonl(
    path: str, text_keys: tuple[str, ...]
) -> tuple[dict[str, str], list[str]]:
    """Read {id -> text} from JSONL, also returning ids in file order."""
    entries: dict[str, str] = {}
    order: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            key = obj.get("sample_id") or obj.get("pair_id") or obj.get("id")
            if key is None:
                raise ValidationError(f"{path}: line {line_no}: missing sample_id")
            text = next((obj[k] for k in text_keys if k in obj), None)
            if text is None:
                raise ValidationError(
                    f"{path}: line {line_no}: missing one of {text_keys}"
                )
            if key in entries:
                raise ValidationError(f"{path}: line {line_no}: duplicate id {key!r}")
            entries[key] = text
            order.append(key)
    return entries, order


# -- subcommand handlers ----------------------------------------------------


def _cmd_corpus(args) -> int:
    if args.action == "validate":
        samples = load_corpus(args.path)
        print(f"OK: {len(samples)} samples")
        return EXIT_OK
    if args.action == "split":
        samples = load_corpus(args.path)
        train, test = split_corpus(samples, args.fraction, args.seed)
        content = _jsonl(
            {"sample_id": a.sample_id, "partition": a.partition.value}
            for a in assignments_for(train, test)
        )
        _emit(content, args.out)
        print(f"train={len(train)} test={len(test)}", file=sys.stderr)
        return EXIT_OK
    if args.action == "coverage":
        samples = load_corpus(args.path)
        coverage = tactic_coverage(samples)
        obj = {
            "by_tactic": {
                t.value: {
                    "reference": c.reference,
                    "extended": c.extended,
                    "total": c.total,
                }
                for t, c in coverage.by_tactic.items()
            },
            "untagged": {
                "reference": coverage.untagged.reference,
                "extended": coverage.untagged.extended,
                "total": coverage.untagged.total,
            },
            "total_tagged": coverage.tagged_total,
        }
        _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    raise _UsageError(f"unknown corpus action {args.action!r}")


def _cmd_lint(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    diags = _analyze_snippet(source, _lint_config(args.config))
    _emit(_jsonl(d.to_json_obj() for d in diags), args.out)
    if args.fail_on == "parse-error" and has_parse_error(diags):
        return EXIT_VALIDATION
    return EXIT_OK


def _score_pairs(
    pairs: list[tuple[str, str, str]], config: MetricConfig, jobs: int
) -> list[tuple[str, MetricScores]]:
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(lambda p: score_pair(p[1], p[2], config), pairs))
    else:
        scores = [score_pair(ref, gen, config) for _, ref, gen in pairs]
    return [(pid, s) for (pid, _, _), s in zip(pairs, scores)]


def _load_metric_config(path: str | None) -> MetricConfig:
    if not path:
        return MetricConfig()
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return MetricConfig.from_json_obj(obj.get("metrics", obj))


def _cmd_score(args) -> int:
    config = _load_metric_config(args.config)
    if args.pairs:
        refs, order = _read_keyed_jsonl(args.pairs, ("reference",))
        hyps, _ = _read_keyed_jsonl(args.pairs, ("generated",))
    else:
        if not args.refs or not args.hyps:
            raise _UsageError("score needs --pairs or both --refs and --hyps")
        refs, order = _read_keyed_jsonl(args.refs, ("text", "snippet", "reference"))
        hyps, _ = _read_keyed_jsonl(args.hyps, ("text", "snippet", "generated"))
        if set(refs) != set(hyps):
            missing = sorted(set(refs) ^ set(hyps))
            raise ValidationError(f"refs/hyps ids are not aligned: {missing}")
    pairs = [(pid, refs[pid], hyps[pid]) for pid in order]
    scored = _score_pairs(pairs, config, args.jobs)
    _emit(
        _jsonl({"sample_id": pid, **s.to_json_obj(ndigits=6)} for pid, s in scored),
        args.out,
    )
    return EXIT_OK


def _generation_config(args) -> GenerationConfig:
    return GenerationConfig(
        endpoint_url=args.endpoint,
        model_name=args.model,
        temperature=args.temperature,
        max_tokens=args.max_tokens,
        timeout=args.timeout,
        max_retries=args.retries,
    )


def _cmd_generate(args) -> int:
    samples = load_corpus(args.corpus)
    config = _generation_config(args)
    items = batch_generate([s.description for s in samples], config, args.jobs)
    records = []
    failures = 0
    for sample, item in zip(samples, items):
        if item.ok:
            records.append(
                {
                    "sample_id": sample.id,
                    "description": sample.description,
                    "snippet": item.result.snippet,
                    "raw": item.result.raw,
                }
            )
        else:
            failures += 1
            records.append(
                {
                    "sample_id": sample.id,
                    "description": sample.description,
                    "error": item.error,
                }
            )
    _emit(_jsonl(records), args.out)
    if failures and failures == len(items):
        raise GenerationError(f"all {failures} generation requests failed")
    if failures:
        print(f"{failures}/{len(items)} generations failed", file=sys.stderr)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    out_dir = Path(args.out)
    lint_cfg = _lint_config(args.config)
    metric_cfg = _load_metric_config(args.config)
    samples = load_corpus(args.corpus)
    train, test = split_corpus(samples, args.fraction, args.seed)

    gen_config = _generation_config(args)
    items = batch_generate([s.description for s in test], gen_config, args.jobs)
    failed = [s.id for s, item in zip(test, items) if not item.ok]
    if failed:
        raise GenerationError(
            f"{len(failed)} generation requests failed: {failed[:5]}"
        )

    generated = {s.id: item.result.snippet for s, item in zip(test, items)}
    diagnostics = {sid: _analyze_snippet(text, lint_cfg) for sid, text in generated.items()}
    scores = {
        s.id: score_pair(s.snippet, generated[s.id], metric_cfg) for s in test
    }

    manifest = RunManifest(
        model_name=args.model,
        dataset_id=Path(args.corpus).stem,
        split_seed=args.seed,
        train_fraction=args.fraction,
        epochs=args.epochs,
        context_prompt=gen_config.system_context,
        metric_config=metric_cfg,
    )
    report = build_report(manifest, test, generated, diagnostics, scores)

    _atomic_write(
        out_dir / "assignments.jsonl",
        _jsonl(
            {"sample_id": a.sample_id, "partition": a.partition.value}
            for a in assignments_for(train, test)
        ),
    )
    _atomic_write(
        out_dir / "generations.jsonl",
        _jsonl(
            {
                "sample_id": s.id,
                "description": s.description,
                "snippet": item.result.snippet,
                "raw": item.result.raw,
            }
            for s, item in zip(test, items)
        ),
    )
    _atomic_write(
        out_dir / "triage.jsonl",
        _jsonl(
            triage_sample(diagnostics[s.id], sample_id=s.id).to_json_obj()
            for s in test
        ),
    )
    _atomic_write(
        out_dir / "scores.jsonl",
        _jsonl(
            {"sample_id": s.id, **scores[s.id].to_json_obj(ndigits=6)} for s in test
        ),
    )
    for fmt in (ReportFormat.JSON, ReportFormat.CSV, ReportFormat.MARKDOWN):
        _atomic_write(out_dir / f"report.{fmt.value}", render(report, fmt))
    if not args.no_figures:
        from redshell_eval.figures import render_figures

        render_figures(report, out_dir)
    print(f"report written to {out_dir}", file=sys.stderr)
    return EXIT_OK


def _cmd_report(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        report = EvaluationReport.from_json_obj(json.load(fh))
    fmt = ReportFormat(args.format)
    _emit(render(report, fmt), args.out)
    if args.figures_dir:
        from redshell_eval.figures import render_figures

        render_figures(report, args.figures_dir)
    return EXIT_OK


# -- argument wiring ---------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="redshell-eval", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    common.add_argument("--config", help="JSON run configuration (rules, aliases, metrics)")
    common.add_argument("--out", help="output file (default: stdout)")

    p_corpus = sub.add_parser("corpus", parents=[common], help="corpus management")
    p_corpus.add_argument("action", choices=["validate", "split", "coverage"])
    p_corpus.add_argument("path")
    p_corpus.add_argument("--fraction", type=float, default=0.9)

    p_lint = sub.add_parser("lint", parents=[common], help="analyze a script")
    p_lint.add_argument("file")
    p_lint.add_argument("--fail-on", choices=["parse-error"], default=None)

    p_score = sub.add_parser("score", parents=[common], help="score pairs")
    p_score.add_argument("--refs")
    p_score.add_argument("--hyps")
    p_score.add_argument("--pairs")
    p_score.add_argument("--jobs", type=int, default=1)

    endpoint = argparse.ArgumentParser(add_help=False)
    endpoint.add_argument("--endpoint", required=True)
    endpoint.add_argument("--model", default="local-model")
    endpoint.add_argument("--temperature", type=float, default=0.0)
    endpoint.add_argument("--max-tokens", type=int, default=256)
    endpoint.add_argument("--timeout", type=float, default=30.0)
    endpoint.add_argument("--retries", type=int, default=2)
    endpoint.add_argument("--jobs", type=int, default=1)

    p_gen = sub.add_parser(
        "generate", parents=[common, endpoint], help="gather completions"
    )
    p_gen.add_argument("--corpus", required=True)

    p_eval = sub.add_parser(
        "evaluate", parents=[common, endpoint], help="end-to-end evaluation"
    )
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--fraction", type=float, default=0.9)
    p_eval.add_argument("--epochs", type=int, default=0)
    p_eval.add_argument("--no-figures", action="store_true")

    p_report = sub.add_parser("report", parents=[common], help="re-render a report")
    p_report.add_argument("report")
    p_report.add_argument("--format", choices=[f.value for f in ReportFormat], default="md")
    p_report.add_argument("--figures-dir")

    return parser


_HANDLERS = {
    "corpus": _cmd_corpus,
    "lint": _cmd_lint,
    "score": _cmd_score,
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
}


def dispatch(argv: list[str]) -> int:
    """Run one CLI invocation and return its exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_VALIDATION
        # evaluate requires a directory output
        if args.command == "evaluate" and not args.out:
            raise _UsageError("evaluate requires --out DIRECTORY")
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    except GenerationError as exc:
        print(f"endpoint error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RedshellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
