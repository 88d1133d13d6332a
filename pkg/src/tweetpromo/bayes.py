"""Naive Bayes over binary attributes plus a Gaussian-modelled intent score."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .corpus import ALL_ATTRIBUTES, CLASSES, NONE, PROMOTIONAL, Dataset, FeatureVector

MODEL_FORMAT = "tweetpromo-naive-bayes"
MODEL_VERSION = 1
VARIANCE_FLOOR = 1e-4
SCORE_ATTRIBUTE = "intent_score"
# log-joint gaps smaller than this are rounding noise and count as a tie
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BayesModel:
    attributes: tuple[str, ...]
    priors: Mapping[str, float]
    binary_tables: Mapping[str, Mapping[str, float]]
    score_gauss: Optional[Mapping[str, tuple[float, float]]] = None

    @property
    def binary_attributes(self) -> tuple[str, ...]:
        return tuple(a for a in self.attributes if a != SCORE_ATTRIBUTE)

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "attributes": list(self.attributes),
            "priors": dict(self.priors),
            "conditionals": {a: dict(t) for a, t in self.binary_tables.items()},
            "score_gaussian": (
                {c: {"mean": m, "variance": v} for c, (m, v) in self.score_gauss.items()}
                if self.score_gauss is not None else None
            ),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BayesModel":
        if data.get("format") != MODEL_FORMAT:
            raise ValueError(f"not a {MODEL_FORMAT} model file")
        if data.get("version") != MODEL_VERSION:
            raise ValueError(f"unsupported model version {data.get('version')!r}")
        gauss = data.get("score_gaussian")
        return cls(
            attributes=tuple(data["attributes"]),
            priors={c: float(p) for c, p in data["priors"].items()},
            binary_tables={a: {c: float(p) for c, p in t.items()} for a, t in data["conditionals"].items()},
            score_gauss=(
                {c: (float(g["mean"]), float(g["variance"])) for c, g in gauss.items()}
                if gauss is not None else None
            ),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "BayesModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _mean_var(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1) if n > 1 else 0.0
    return mean, max(var, VARIANCE_FLOOR)


def fit(train: Dataset, attributes: Sequence[str] = ALL_ATTRIBUTES, alpha: float = 1.0) -> BayesModel:
    """Laplace-smoothed class priors and attribute conditionals."""
    unknown = [a for a in attributes if a not in ALL_ATTRIBUTES]
    if unknown:
        raise ValueError(f"unknown attribute(s): {', '.join(unknown)}")
    if any(r.label is None for r in train):
        raise ValueError("training rows must all be labelled")
    by_class = {c: [r for r in train if r.label == c] for c in CLASSES}
    if any(not rows for rows in by_class.values()):
        raise ValueError("need both classes in the training data")
    n = len(train)
    priors = {c: (len(rows) + alpha) / (n + alpha * len(CLASSES)) for c, rows in by_class.items()}
    tables = {}
    for a in attributes:
        if a == SCORE_ATTRIBUTE:
            continue
        tables[a] = {
            c: (sum(1 for r in rows if getattr(r, a)) + alpha) / (len(rows) + 2 * alpha)
            for c, rows in by_class.items()
        }
    gauss = None
    if SCORE_ATTRIBUTE in attributes:
        gauss = {c: _mean_var([r.intent_score for r in rows]) for c, rows in by_class.items()}
    return BayesModel(tuple(attributes), priors, tables, gauss)


def _log_gauss(x: float, mean: float, var: float) -> float:
    return -0.5 * math.log(2 * math.pi * var) - (x - mean) ** 2 / (2 * var)


def log_joint(model: BayesModel, fv: FeatureVector) -> dict[str, float]:
    """log P(c) + sum log P(x_i | c) for each class."""
    if not 0.0 <= fv.intent_score <= 1.0:
        raise ValueError(f"intent_score {fv.intent_score} outside [0, 1]")
    out = {}
    for c in CLASSES:
        total = math.log(model.priors[c])
        for a in model.binary_attributes:
            p = model.binary_tables[a][c]
            total += math.log(p if getattr(fv, a) else 1.0 - p)
        if model.score_gauss is not None:
            total += _log_gauss(fv.intent_score, *model.score_gauss[c])
        out[c] = total
    return out


def predict(model: BayesModel, fv: FeatureVector) -> tuple[str, dict[str, float]]:
    """Most probable class and the normalised posterior; ties go to ``none``."""
    logs = log_joint(model, fv)
    top = max(logs.values())
    weights = {c: math.exp(v - top) for c, v in logs.items()}
    z = sum(weights.values())
    posterior = {c: w / z for c, w in weights.items()}
    label = PROMOTIONAL if logs[PROMOTIONAL] - logs[NONE] > TIE_TOLERANCE else NONE
    return label, posterior
