"""End-to-end batch processing: cleanse, extract attributes, classify."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import bayes
from .cleanse import CleanTweet, normalize
from .config import PipelineConfig
from .corpus import PROMOTIONAL, FeatureVector, Tweet, feature_row, FEATURE_HEADER, load_tweets
from .features import extract
from .intent import IntentEngine
from .lexicon import load_lexicon

PREDICTION_HEADER = ["Id"] + FEATURE_HEADER + ["Predicted", "PromotionalProbability"]
SKIP_HEADER = ["Id", "Reason"]


@dataclass(frozen=True)
class Processed:
    tweet: Tweet
    clean: Optional[CleanTweet]
    features: Optional[FeatureVector]
    skip_reason: str = ""


@dataclass(frozen=True)
class PipelineResult:
    predictions: tuple[tuple[int, FeatureVector, str, float], ...]
    skipped: tuple[tuple[int, str], ...]


class Pipeline:
    def __init__(self, config: PipelineConfig, resolver=None):
        self.config = config
        self.lexicon = load_lexicon(config.lexicon)
        self.engine = IntentEngine(self.lexicon, config.weights)
        self.resolver = resolver if resolver is not None else config.make_resolver()

    def clean(self, tweet: Tweet) -> CleanTweet:
        return normalize(tweet, self.resolver, self.config.shorteners, self.config.english_threshold)

    def process(self, tweets: Iterable[Tweet]) -> list[Processed]:
        out = []
        for t in tweets:
            if t.simulated:
                out.append(Processed(t, None, None, "simulated placeholder"))
                continue
            clean = self.clean(t)
            if not clean.kept:
                out.append(Processed(t, clean, None, "not English"))
                continue
            out.append(Processed(t, clean, extract(clean, self.engine)))
        return out


def _write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def skipped_path(out_path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.stem + ".skipped.csv")


def classify(model: bayes.BayesModel, items: Iterable[tuple[int, FeatureVector]]):
    for ident, fv in items:
        label, post = bayes.predict(model, fv)
        yield ident, fv, label, post[PROMOTIONAL]


def write_predictions(path, predictions: Iterable[tuple[int, FeatureVector, str, float]]) -> None:
    _write_csv(path, PREDICTION_HEADER, (
        [ident] + feature_row(fv) + ["y" if label == PROMOTIONAL else "n", f"{p:.6f}"]
        for ident, fv, label, p in predictions
    ))


def run_pipeline(tweets_path, config: PipelineConfig, model_path, out_path,
                 resolver=None) -> PipelineResult:
    """Classify every usable tweet in ``tweets_path`` and write a predictions
    CSV plus a ``.skipped.csv`` listing dropped tweets with the reason."""
    model_path = Path(model_path)
    if not model_path.is_file():
        raise FileNotFoundError(f"model file not found: {model_path}")
    model = bayes.BayesModel.load(model_path)
    tweets_path = Path(tweets_path)
    if not tweets_path.is_file():
        raise FileNotFoundError(f"cannot read tweets: {tweets_path}")
    fmt = "csv" if tweets_path.suffix.lower() == ".csv" else "json-lines"
    processed = Pipeline(config, resolver).process(load_tweets(tweets_path, fmt))
    predictions = tuple(classify(model, ((p.tweet.id, p.features) for p in processed if p.features)))
    skipped = tuple((p.tweet.id, p.skip_reason) for p in processed if p.features is None)
    write_predictions(out_path, predictions)
    _write_csv(skipped_path(out_path), SKIP_HEADER, skipped)
    return PipelineResult(predictions, skipped)
