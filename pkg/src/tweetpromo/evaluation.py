"""Stratified cross-validation, classifier metrics and per-attribute
contingency statistics."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import bayes
from .corpus import ALL_ATTRIBUTES, BINARY_ATTRIBUTES, CLASSES, NONE, PROMOTIONAL, Dataset


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with ``promotional`` as the positive class."""

    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @classmethod
    def from_labels(cls, actual: Sequence[str], predicted: Sequence[str]) -> "ConfusionMatrix":
        pairs = list(zip(actual, predicted))
        return cls(
            tp=sum(1 for a, p in pairs if a == PROMOTIONAL and p == PROMOTIONAL),
            fn=sum(1 for a, p in pairs if a == PROMOTIONAL and p == NONE),
            fp=sum(1 for a, p in pairs if a == NONE and p == PROMOTIONAL),
            tn=sum(1 for a, p in pairs if a == NONE and p == NONE),
        )


@dataclass(frozen=True)
class ClassMetrics:
    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float
    mcc: float
    roc_area: float


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    kappa: float
    mae: float
    rmse: float
    rae: float
    rrse: float
    per_class: dict[str, ClassMetrics]
    weighted: ClassMetrics
    confusion: ConfusionMatrix
    undefined: frozenset[str] = frozenset()

    @property
    def correct(self) -> int:
        return self.confusion.tp + self.confusion.tn


def _ratio(num: float, den: float, name: str, undefined: set) -> float:
    if den == 0:
        undefined.add(name)
        return 0.0
    return num / den


def roc_area(records: Sequence[tuple[str, float]]) -> Optional[float]:
    """Mann-Whitney estimate of the area under the ROC curve for the
    promotional class; ties count one half."""
    pos = [p for label, p in records if label == PROMOTIONAL]
    neg = [p for label, p in records if label == NONE]
    if not pos or not neg:
        return None
    # rank-sum with midranks for ties
    ordered = sorted((p, i) for i, p in enumerate(pos + neg))
    ranks = [0.0] * len(ordered)
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1][0] == ordered[i][0]:
            j += 1
        mid = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[ordered[k][1]] = mid
        i = j + 1
    rank_sum = sum(ranks[: len(pos)])
    u = rank_sum - len(pos) * (len(pos) + 1) / 2
    return u / (len(pos) * len(neg))


def compute_metrics(confusion: ConfusionMatrix, records: Sequence[tuple[str, float]],
                    baseline: Optional[Sequence[float]] = None) -> EvalReport:
    """Accuracy, kappa, error measures and per-class rates.

    ``records`` holds ``(true label, P(promotional))`` per instance;
    ``baseline`` gives the prior-probability prediction used by the relative
    errors (defaults to the Laplace-smoothed class rate of ``records``).
    """
    n = confusion.total
    if n != len(records):
        raise ValueError(f"confusion total {n} does not match {len(records)} records")
    undefined: set[str] = set()
    tp, fn, fp, tn = confusion.tp, confusion.fn, confusion.fp, confusion.tn

    accuracy = _ratio(tp + tn, n, "accuracy", undefined)
    p_e = _ratio((tp + fn) * (tp + fp) + (fp + tn) * (fn + tn), n * n, "kappa", undefined)
    kappa = _ratio(accuracy - p_e, 1 - p_e, "kappa", undefined) if n else 0.0

    truth = [1.0 if label == PROMOTIONAL else 0.0 for label, _ in records]
    probs = [p for _, p in records]
    if baseline is None:
        rate = (sum(truth) + 1) / (len(truth) + 2)
        baseline = [rate] * len(truth)
    abs_err = sum(abs(p - y) for p, y in zip(probs, truth))
    sq_err = sum((p - y) ** 2 for p, y in zip(probs, truth))
    base_abs = sum(abs(b - y) for b, y in zip(baseline, truth))
    base_sq = sum((b - y) ** 2 for b, y in zip(baseline, truth))
    mae = _ratio(abs_err, n, "mae", undefined)
    rmse = math.sqrt(_ratio(sq_err, n, "rmse", undefined))
    rae = _ratio(abs_err, base_abs, "rae", undefined)
    rrse = math.sqrt(_ratio(sq_err, base_sq, "rrse", undefined))

    mcc = _ratio(tp * tn - fp * fn, math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)), "mcc", undefined)
    auc = roc_area(records)
    if auc is None:
        undefined.add("roc_area")
        auc = 0.0

    def class_metrics(c: str, tp_, fn_, fp_, tn_) -> ClassMetrics:
        recall = _ratio(tp_, tp_ + fn_, f"recall[{c}]", undefined)
        precision = _ratio(tp_, tp_ + fp_, f"precision[{c}]", undefined)
        return ClassMetrics(
            tp_rate=recall,
            fp_rate=_ratio(fp_, fp_ + tn_, f"fp_rate[{c}]", undefined),
            precision=precision,
            recall=recall,
            f_measure=_ratio(2 * precision * recall, precision + recall, f"f_measure[{c}]", undefined),
            mcc=mcc,
            roc_area=auc,
        )

    per_class = {
        PROMOTIONAL: class_metrics(PROMOTIONAL, tp, fn, fp, tn),
        NONE: class_metrics(NONE, tn, fp, fn, tp),
    }
    support = {PROMOTIONAL: tp + fn, NONE: fp + tn}
    weighted = ClassMetrics(**{
        name: _ratio(sum(getattr(per_class[c], name) * support[c] for c in CLASSES), n, "weighted", undefined)
        for name in ClassMetrics.__dataclass_fields__
    })
    return EvalReport(accuracy, kappa, mae, rmse, rae, rrse, per_class, weighted, confusion, frozenset(undefined))


def stratified_folds(dataset: Dataset, k: int, seed: int) -> list[tuple[list[int], list[int]]]:
    """Split row indices into ``k`` (train, test) pairs.

    Each class is shuffled with the seed and dealt round-robin; the dealing
    continues across classes so fold sizes differ by at most one.
    """
    n = len(dataset)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} rows")
    rng = random.Random(seed)
    buckets: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for c in CLASSES:
        members = [i for i, r in enumerate(dataset.rows) if r.label == c]
        if not members:
            raise ValueError(f"class {c!r} has no instances")
        rng.shuffle(members)
        for i in members:
            buckets[cursor % k].append(i)
            cursor += 1
    folds = []
    for f in range(k):
        test = sorted(buckets[f])
        held = set(test)
        folds.append(([i for i in range(n) if i not in held], test))
    return folds


@dataclass(frozen=True)
class Prediction:
    index: int
    actual: str
    predicted: str
    p_promotional: float
    fold: int


@dataclass(frozen=True)
class CrossValidation:
    report: EvalReport
    predictions: tuple[Prediction, ...]
    k: int
    seed: int
    attributes: tuple[str, ...]


def cross_validate(dataset: Dataset, k: int = 10, seed: int = 1,
                   attributes: Sequence[str] = ALL_ATTRIBUTES) -> CrossValidation:
    preds: list[Prediction] = []
    baseline: dict[int, float] = {}
    for f, (train_idx, test_idx) in enumerate(stratified_folds(dataset, k, seed)):
        model = bayes.fit(dataset.subset(train_idx), attributes)
        for i in test_idx:
            row = dataset.rows[i]
            label, post = bayes.predict(model, row)
            preds.append(Prediction(i, row.label, label, post[PROMOTIONAL], f))
            baseline[i] = model.priors[PROMOTIONAL]
    preds.sort(key=lambda p: p.index)
    confusion = ConfusionMatrix.from_labels([p.actual for p in preds], [p.predicted for p in preds])
    report = compute_metrics(confusion, [(p.actual, p.p_promotional) for p in preds],
                             [baseline[p.index] for p in preds])
    return CrossValidation(report, tuple(preds), k, seed, tuple(attributes))


@dataclass(frozen=True)
class ContingencyRow:
    value: bool
    promotional: int
    none: int

    @property
    def total(self) -> int:
        return self.promotional + self.none

    @property
    def promotional_share(self) -> float:
        return self.promotional / self.total if self.total else 0.0


@dataclass(frozen=True)
class AttributeTable:
    attribute: str
    rows: tuple[ContingencyRow, ...]

    def row(self, value: bool) -> Optional[ContingencyRow]:
        return next((r for r in self.rows if r.value == value), None)


def attribute_report(dataset: Dataset, attributes: Sequence[str] = BINARY_ATTRIBUTES) -> list[AttributeTable]:
    """Label counts for each value of each binary attribute."""
    if any(r.label is None for r in dataset):
        raise ValueError("attribute report needs a labelled dataset")
    tables = []
    for a in attributes:
        rows = []
        for value in (True, False):
            members = [r for r in dataset if getattr(r, a) == value]
            if members:
                rows.append(ContingencyRow(
                    value,
                    sum(1 for r in members if r.label == PROMOTIONAL),
                    sum(1 for r in members if r.label == NONE),
                ))
        tables.append(AttributeTable(a, tuple(rows)))
    return tables
