"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import bayes, reporting
from .config import PipelineConfig, load_config, parse_resolver_flag
from .corpus import (
    ALL_ATTRIBUTES,
    DataError,
    load_feature_csv,
    load_test_round,
    load_tweets,
    read_ledger,
    sample_tweets,
    save_feature_csv,
    save_tweets,
    write_ledger,
)
from .evaluation import attribute_report, cross_validate
from .features import FilteredTweetError
from .pipeline import Pipeline, classify, run_pipeline, write_predictions

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

WITHOUT_INTENT = tuple(a for a in ALL_ATTRIBUTES if a not in ("intent", "intent_score"))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _timestamp(args) -> Optional[str]:
    if args.no_timestamp:
        return None
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _emit(args, text: str) -> None:
    stamp = _timestamp(args)
    if stamp:
        sys.stdout.write(f"# generated {stamp}\n")
    sys.stdout.write(text)


def _config(args) -> PipelineConfig:
    cfg = load_config(args.config)
    if getattr(args, "resolver", None):
        mode, path = parse_resolver_flag(args.resolver)
        changes = {"resolver_mode": mode}
        if path is not None:
            if not path.is_file():
                raise FileNotFoundError(f"resolver fixture not found: {path}")
            changes["resolver_fixture"] = path
        cfg = dataclasses.replace(cfg, **changes)
    return cfg


def _tweet_format(path: Path) -> str:
    return "csv" if path.suffix.lower() == ".csv" else "json-lines"


def cmd_cleanse(args) -> int:
    pipe = Pipeline(_config(args))
    tweets = load_tweets(args.input, _tweet_format(args.input))
    with open(args.output, "w", encoding="utf-8") as fh:
        for t in tweets:
            c = pipe.clean(t)
            fh.write(json.dumps({
                "id": t.id,
                "text": c.text,
                "kept": c.kept,
                "resolved_urls": [dataclasses.asdict(r) for r in c.resolved_urls],
            }, ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_extract(args) -> int:
    pipe = Pipeline(_config(args))
    processed = pipe.process(load_tweets(args.input, _tweet_format(args.input)))
    save_feature_csv([p.features for p in processed if p.features], args.output)
    for p in processed:
        if p.features is None:
            print(f"skipped {p.tweet.id}: {p.skip_reason}", file=sys.stderr)
    return EXIT_OK


def _explain(analysis) -> str:
    lines = ["tokens: " + " ".join(analysis.tokens)]
    for m in analysis.tags.matches:
        lines.append(f"  entity {m.category:<24} {m.phrase!r} tokens[{m.start}:{m.end}]")
    lines.append(f"  azure_positive={analysis.tags.azure_positive} direction={analysis.direction.value}")
    total = 0.0
    for name, value in analysis.contributions:
        total += value
        lines.append(f"  rule {name:<24} {value:+.2f}")
    lines.append(f"  evidence {total:+.2f} -> intent={analysis.result.intent} score={analysis.result.score:.4f}")
    return "\n".join(lines)


def cmd_intent(args) -> int:
    pipe = Pipeline(_config(args))
    if args.text is not None:
        items = [("text", args.text)]
    else:
        items = []
        for t in load_tweets(args.input, _tweet_format(args.input)):
            if not t.simulated:
                items.append((str(t.id), pipe.clean(t).text))
    for ident, text in items:
        analysis = pipe.engine.analyze(text)
        print(f"{ident}\t{analysis.result.intent}\t{analysis.result.score:.4f}")
        if args.explain:
            print(_explain(analysis))
    return EXIT_OK


def _attributes(args) -> tuple:
    return WITHOUT_INTENT if args.without_intent else ALL_ATTRIBUTES


def cmd_train(args) -> int:
    model = bayes.fit(load_feature_csv(args.input), _attributes(args))
    model.save(args.output)
    return EXIT_OK


def _read_header(path: Path) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        return next(csv.reader(fh), [])


def cmd_predict(args) -> int:
    cfg = _config(args)
    model_path = args.model or cfg.model
    if args.features is not None:
        if not Path(model_path).is_file():
            raise FileNotFoundError(f"model file not found: {model_path}")
        model = bayes.BayesModel.load(model_path)
        if "ReferencePrediction" in _read_header(args.features):
            rows = load_test_round(args.features)
            items = [(i, dataclasses.replace(r.features, label=r.actual)) for i, r in enumerate(rows, 1)]
        else:
            rows = None
            items = list(enumerate(load_feature_csv(args.features).rows, 1))
        predictions = list(classify(model, items))
        write_predictions(args.output, predictions)
        if rows is not None:
            agree = sum(1 for (_, _, label, _), r in zip(predictions, rows) if label == r.reference_prediction)
            correct = sum(1 for (_, _, label, _), r in zip(predictions, rows) if label == r.actual)
            print(f"agreement with reference predictions: {agree}/{len(rows)}; correct vs actual: {correct}/{len(rows)}")
        return EXIT_OK
    if args.input is None:
        raise UsageError("predict needs --in TWEETS or --features CSV")
    result = run_pipeline(args.input, cfg, model_path, args.output)
    print(f"{len(result.predictions)} predicted, {len(result.skipped)} skipped")
    return EXIT_OK


def cmd_crossval(args) -> int:
    cfg = _config(args)
    k = args.k if args.k is not None else cfg.folds
    seed = args.seed if args.seed is not None else cfg.seed
    cv = cross_validate(load_feature_csv(args.input), k, seed, _attributes(args))
    _emit(args, reporting.format_eval(cv.report))
    if args.json_out:
        data = reporting.eval_to_dict(cv)
        stamp = _timestamp(args)
        if stamp:
            data["generated"] = stamp
        reporting.write_json(data, args.json_out)
    if args.figures:
        args.figures.mkdir(parents=True, exist_ok=True)
        reporting.plot_roc(cv, args.figures / "roc.png")
    return EXIT_OK


def cmd_report(args) -> int:
    tables = attribute_report(load_feature_csv(args.input))
    _emit(args, reporting.format_attribute_report(tables))
    if args.csv_out:
        Path(args.csv_out).write_text(reporting.attribute_report_csv(tables), encoding="utf-8")
    if args.figures:
        args.figures.mkdir(parents=True, exist_ok=True)
        reporting.plot_attribute_bars(tables, args.figures / "attributes.png")
    return EXIT_OK


def cmd_sample(args) -> int:
    corpus = load_tweets(args.input, _tweet_format(args.input))
    ledger = read_ledger(args.ledger)
    picked = sample_tweets(corpus, args.n, args.seed, ledger)
    save_tweets(picked, args.output)
    write_ledger(ledger, args.ledger)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="INI config file (defaults to the bundled settings)")
    common.add_argument("--no-timestamp", action="store_true", help="omit the generated-at header line")

    resolver = _Parser(add_help=False)
    resolver.add_argument("--resolver", help="fixture:<path> or live")

    parser = _Parser(prog="tweetpromo", description="Promotional tweet classifier.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cleanse", parents=[common, resolver], help="normalise tweets and expand short links")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)
    p.set_defaults(func=cmd_cleanse)

    p = sub.add_parser("extract", parents=[common, resolver], help="write the attribute CSV for tweets")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("intent", parents=[common, resolver], help="run the rule-based intent model")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--in", dest="input", type=Path)
    p.add_argument("--explain", action="store_true", help="print entities and every fired rule")
    p.set_defaults(func=cmd_intent)

    p = sub.add_parser("train", parents=[common], help="fit Naive Bayes on an attribute CSV")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)
    p.add_argument("--without-intent", action="store_true", help="drop the Intent and IntentScore attributes")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", parents=[common, resolver], help="classify tweets or attribute rows")
    p.add_argument("--model", type=Path)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", type=Path, help="tweets (JSON lines or CSV)")
    src.add_argument("--features", type=Path, help="attribute CSV (predict-only mode)")
    p.add_argument("--out", dest="output", type=Path, required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("crossval", parents=[common], help="stratified k-fold cross-validation")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--json-out", type=Path)
    p.add_argument("--figures", type=Path, help="directory for roc.png")
    p.add_argument("--without-intent", action="store_true")
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("report", parents=[common], help="per-attribute contingency report")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--csv-out", type=Path)
    p.add_argument("--figures", type=Path, help="directory for attributes.png")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sample", parents=[common], help="draw unseen tweets, recording them in a ledger")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ledger", type=Path, required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tweetpromo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FilteredTweetError, ValueError, OSError) as exc:
        print(f"tweetpromo: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
