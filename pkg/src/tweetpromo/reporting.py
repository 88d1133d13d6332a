"""Text, CSV and JSON renderings of evaluation results, plus figures."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

from .corpus import CLASSES, CSV_COLUMNS, NONE, PROMOTIONAL
from .evaluation import AttributeTable, ClassMetrics, CrossValidation, EvalReport

_CLASS_CODE = {PROMOTIONAL: "y", NONE: "n"}


def format_eval(report: EvalReport) -> str:
    """Summary and per-class blocks laid out like a Weka evaluation summary."""
    n = report.confusion.total
    wrong = n - report.correct
    lines = [
        "=== Stratified cross-validation ===",
        "",
        f"Correctly Classified Instances    {report.correct:5d}    {100 * report.accuracy:9.4f} %",
        f"Incorrectly Classified Instances  {wrong:5d}    {100 * (1 - report.accuracy) if n else 0:9.4f} %",
        f"Kappa statistic                   {report.kappa:11.4f}",
        f"Mean absolute error               {report.mae:11.4f}",
        f"Root mean squared error           {report.rmse:11.4f}",
        f"Relative absolute error           {100 * report.rae:11.4f} %",
        f"Root relative squared error       {100 * report.rrse:11.4f} %",
        f"Total Number of Instances         {n:5d}",
        "",
        "=== Detailed Accuracy By Class ===",
        "",
        "               TP Rate  FP Rate  Precision  Recall  F-Measure  MCC    ROC Area  Class",
    ]

    def row(prefix: str, m: ClassMetrics, cls: str) -> str:
        return (f"{prefix:<15}{m.tp_rate:7.3f}  {m.fp_rate:7.3f}  {m.precision:9.3f}  {m.recall:6.3f}  "
                f"{m.f_measure:9.3f}  {m.mcc:5.3f}  {m.roc_area:8.3f}  {cls}")

    for c in CLASSES:
        lines.append(row("", report.per_class[c], _CLASS_CODE[c]))
    lines.append(row("Weighted Avg.", report.weighted, ""))
    cm = report.confusion
    lines += [
        "",
        "=== Confusion Matrix ===",
        "",
        "  a  b   <-- classified as",
        f"{cm.tp:3d}{cm.fn:3d} |  a = y",
        f"{cm.fp:3d}{cm.tn:3d} |  b = n",
    ]
    if report.undefined:
        lines += ["", "undefined (reported as 0): " + ", ".join(sorted(report.undefined))]
    return "\n".join(lines) + "\n"


def eval_to_dict(cv: CrossValidation) -> dict:
    r = cv.report
    return {
        "folds": cv.k,
        "seed": cv.seed,
        "attributes": list(cv.attributes),
        "accuracy": r.accuracy,
        "kappa": r.kappa,
        "mean_absolute_error": r.mae,
        "root_mean_squared_error": r.rmse,
        "relative_absolute_error": r.rae,
        "root_relative_squared_error": r.rrse,
        "confusion": asdict(r.confusion),
        "per_class": {c: asdict(m) for c, m in r.per_class.items()},
        "weighted": asdict(r.weighted),
        "undefined": sorted(r.undefined),
        "predictions": [asdict(p) for p in cv.predictions],
    }


def write_json(data: dict, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def format_attribute_report(tables: Sequence[AttributeTable]) -> str:
    lines = [f"{'Attribute':<22}{'Value':>6}{'Promo':>7}{'None':>6}{'Total':>7}{'P(promo|value)':>16}"]
    for t in tables:
        for r in t.rows:
            lines.append(f"{CSV_COLUMNS[t.attribute]:<22}{'y' if r.value else 'n':>6}{r.promotional:>7}"
                         f"{r.none:>6}{r.total:>7}{100 * r.promotional_share:>15.1f}%")
    return "\n".join(lines) + "\n"


def attribute_report_csv(tables: Sequence[AttributeTable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Attribute", "Value", "Promotional", "None", "Total", "PromotionalShare"])
    for t in tables:
        for r in t.rows:
            writer.writerow([CSV_COLUMNS[t.attribute], "y" if r.value else "n", r.promotional, r.none,
                             r.total, f"{r.promotional_share:.6f}"])
    return buf.getvalue()


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


_PNG_META = {"Software": None}


def plot_attribute_bars(tables: Sequence[AttributeTable], path) -> Path:
    """One stacked bar pair (n / y) per attribute: red promotional, blue not."""
    plt = _pyplot()
    cols = 5
    rows = -(-len(tables) // cols)
    fig, axes = plt.subplots(rows, cols, figsize=(3 * cols, 2.6 * rows), squeeze=False)
    for ax in axes.flat[len(tables):]:
        ax.set_visible(False)
    for ax, t in zip(axes.flat, tables):
        values = [False, True]
        promo = [(t.row(v).promotional if t.row(v) else 0) for v in values]
        none = [(t.row(v).none if t.row(v) else 0) for v in values]
        ax.bar(["n", "y"], promo, color="tab:red", label="promotional")
        ax.bar(["n", "y"], none, bottom=promo, color="tab:blue", label="none")
        ax.set_title(CSV_COLUMNS[t.attribute], fontsize=9)
        ax.tick_params(labelsize=8)
    axes.flat[0].legend(fontsize=7, loc="upper left")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return path


def roc_points(cv: CrossValidation) -> list[tuple[float, float]]:
    preds = sorted(cv.predictions, key=lambda p: -p.p_promotional)
    pos = sum(1 for p in preds if p.actual == PROMOTIONAL)
    neg = len(preds) - pos
    pts = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(preds):
        j = i
        while j < len(preds) and preds[j].p_promotional == preds[i].p_promotional:
            if preds[j].actual == PROMOTIONAL:
                tp += 1
            else:
                fp += 1
            j += 1
        pts.append((fp / neg if neg else 0.0, tp / pos if pos else 0.0))
        i = j
    return pts


def plot_roc(cv: CrossValidation, path) -> Path:
    plt = _pyplot()
    pts = roc_points(cv)
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.plot([p[0] for p in pts], [p[1] for p in pts], drawstyle="default", marker=".", color="tab:red")
    ax.plot([0, 1], [0, 1], linestyle=":", color="grey")
    ax.set_xlabel("False positive rate")
    ax.set_ylabel("True positive rate")
    ax.set_title(f"ROC, {cv.k}-fold CV (area {cv.report.per_class[PROMOTIONAL].roc_area:.3f})", fontsize=9)
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
    return path
