"""Tweet and feature-vector data model, fixture corpus and flat-file I/O."""

from __future__ import annotations

import csv
import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

PROMOTIONAL = "promotional"
NONE = "none"
CLASSES = (PROMOTIONAL, NONE)

BINARY_ATTRIBUTES = (
    "contains_url",
    "microsoft_url",
    "contains_azure_word",
    "contains_exclamation",
    "contains_colon",
    "contains_question_mark",
    "contains_keyword",
    "mentions_competitor",
    "contains_benefit",
    "intent",
)
ALL_ATTRIBUTES = BINARY_ATTRIBUTES + ("intent_score",)

# CSV column name for each attribute, in training-table order.
CSV_COLUMNS = {
    "contains_url": "ContainsURL",
    "microsoft_url": "MicrosoftURL",
    "contains_azure_word": "ContainsAzureWord",
    "contains_exclamation": "ContainsExclamation",
    "contains_colon": "ContainsColon",
    "contains_question_mark": "ContainsQuestionMark",
    "contains_keyword": "ContainsKeyword",
    "mentions_competitor": "MentionsCompetitor",
    "contains_benefit": "ContainsBenefit",
    "intent": "Intent",
    "intent_score": "IntentScore",
}
LABEL_COLUMN = "Promotional"
FEATURE_HEADER = [CSV_COLUMNS[a] for a in ALL_ATTRIBUTES] + [LABEL_COLUMN]

URL_RE = re.compile(
    r"""(?:https?://|(?<![\w.])(?:t\.co|pic\.twitter\.com)/)[^\s"'<>]+""",
    re.IGNORECASE,
)
_URL_TRAILING = ".,;:!?)]}'\"…"


class DataError(ValueError):
    """Raised for malformed input files."""


@dataclass(frozen=True)
class Tweet:
    id: int
    text: str
    urls: tuple[str, ...] = ()
    simulated: bool = False
    row: Optional[int] = None


@dataclass(frozen=True)
class FeatureVector:
    contains_url: bool
    microsoft_url: bool
    contains_azure_word: bool
    contains_exclamation: bool
    contains_colon: bool
    contains_question_mark: bool
    contains_keyword: bool
    mentions_competitor: bool
    contains_benefit: bool
    intent: bool
    intent_score: float
    label: Optional[str] = None

    def __post_init__(self):
        if not 0.0 <= self.intent_score <= 1.0:
            raise ValueError(f"intent_score {self.intent_score} outside [0, 1]")
        if self.microsoft_url and not self.contains_url:
            raise ValueError("microsoft_url set without contains_url")
        if self.label is not None and self.label not in CLASSES:
            raise ValueError(f"unknown label {self.label!r}")

    def binary_flags(self) -> tuple[bool, ...]:
        return tuple(getattr(self, a) for a in BINARY_ATTRIBUTES)


@dataclass(frozen=True)
class Dataset:
    rows: tuple[FeatureVector, ...]
    source: str = ""

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def labels(self) -> list[str]:
        return [r.label for r in self.rows]

    def class_counts(self) -> dict[str, int]:
        return {c: sum(1 for r in self.rows if r.label == c) for c in CLASSES}

    def subset(self, indices: Iterable[int], source: str = "") -> "Dataset":
        return Dataset(tuple(self.rows[i] for i in indices), source or self.source)


def extract_urls(text: str) -> list[str]:
    """Return URL spans in order, with quotes and trailing punctuation trimmed."""
    urls = []
    for m in URL_RE.finditer(text):
        url = clean_url(m.group(0))
        if url:
            urls.append(url)
    return urls


def clean_url(span: str) -> str:
    span = span.strip().strip("\"'<>“”‘’")
    return span.rstrip(_URL_TRAILING)


def _parse_tweet(record: dict, where: str) -> Tweet:
    try:
        tid = int(record["id"])
        text = str(record["text"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{where}: bad tweet record ({exc})") from None
    if not text.strip():
        raise DataError(f"{where}: empty tweet text")
    row = record.get("row")
    return Tweet(
        id=tid,
        text=text,
        urls=tuple(extract_urls(text)),
        simulated=bool(record.get("simulated", False)),
        row=int(row) if row is not None else None,
    )


def load_tweets(path, format: str = "json-lines") -> list[Tweet]:
    """Load tweets from a JSON-lines or CSV file (``id`` and ``text`` fields)."""
    path = Path(path)
    tweets: list[Tweet] = []
    with path.open(encoding="utf-8", newline="") as fh:
        if format in ("json-lines", "jsonl"):
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
                if not isinstance(record, dict):
                    raise DataError(f"{path}:{lineno}: record is not an object")
                tweets.append(_parse_tweet(record, f"{path}:{lineno}"))
        elif format == "csv":
            reader = csv.DictReader(fh)
            for lineno, record in enumerate(reader, 2):
                tweets.append(_parse_tweet(record, f"{path}:{lineno}"))
        else:
            raise ValueError(f"unknown tweet format {format!r}")
    seen = set()
    for t in tweets:
        if t.id in seen:
            raise DataError(f"{path}: duplicate tweet id {t.id}")
        seen.add(t.id)
    return tweets


def save_tweets(tweets: Iterable[Tweet], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for t in tweets:
            record = {"id": t.id, "text": t.text}
            if t.row is not None:
                record["row"] = t.row
            if t.simulated:
                record["simulated"] = True
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def _yn(value: str, column: str, where: str) -> bool:
    v = value.strip().lower()
    if v in ("y", "yes", "true"):
        return True
    if v in ("n", "no", "false"):
        return False
    raise DataError(f"{where}: column {column} expects y/n, got {value!r}")


def _label(value: str, where: str) -> Optional[str]:
    v = value.strip().lower()
    if v == "":
        return None
    if v in ("y", "yes", "promotion", "promotional"):
        return PROMOTIONAL
    if v in ("n", "no", "none"):
        return NONE
    raise DataError(f"{where}: unrecognised label {value!r}")


def _row_to_vector(record: dict, where: str, label_column: Optional[str]) -> FeatureVector:
    values = {a: _yn(record[CSV_COLUMNS[a]], CSV_COLUMNS[a], where) for a in BINARY_ATTRIBUTES}
    raw_score = record[CSV_COLUMNS["intent_score"]]
    try:
        score = float(raw_score)
    except ValueError:
        raise DataError(f"{where}: IntentScore {raw_score!r} is not a number") from None
    if not 0.0 <= score <= 1.0:
        raise DataError(f"{where}: IntentScore {score} outside [0, 1]")
    label = _label(record[label_column], where) if label_column else None
    if values["microsoft_url"] and not values["contains_url"]:
        raise DataError(f"{where}: MicrosoftURL=y requires ContainsURL=y")
    return FeatureVector(intent_score=score, label=label, **values)


def _check_header(header: list[str], expected: list[str], path) -> None:
    unknown = [c for c in header if c not in expected]
    missing = [c for c in expected if c not in header]
    if unknown or missing or header != expected:
        parts = []
        if unknown:
            parts.append("unknown column(s): " + ", ".join(unknown))
        if missing:
            parts.append("missing column(s): " + ", ".join(missing))
        if not parts:
            parts.append("columns out of order")
        raise DataError(f"{path}: bad header; " + "; ".join(parts))


def load_feature_csv(path) -> Dataset:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: missing header")
        _check_header([h.strip() for h in header], FEATURE_HEADER, path)
        rows = []
        for lineno, values in enumerate(reader, 2):
            if not any(v.strip() for v in values):
                continue
            if len(values) != len(FEATURE_HEADER):
                raise DataError(f"{path}:{lineno}: expected {len(FEATURE_HEADER)} fields, got {len(values)}")
            record = dict(zip(FEATURE_HEADER, values))
            rows.append(_row_to_vector(record, f"{path}:{lineno}", LABEL_COLUMN))
    return Dataset(tuple(rows), source=str(path))


def _format_score(score: float) -> str:
    text = repr(float(score))
    return text[:-2] if text.endswith(".0") else text


def feature_row(fv: FeatureVector) -> list[str]:
    cells = ["y" if getattr(fv, a) else "n" for a in BINARY_ATTRIBUTES]
    cells.append(_format_score(fv.intent_score))
    cells.append({PROMOTIONAL: "y", NONE: "n", None: ""}[fv.label])
    return cells


def save_feature_csv(dataset: Iterable[FeatureVector], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FEATURE_HEADER)
        for fv in dataset:
            writer.writerow(feature_row(fv))


@dataclass(frozen=True)
class TestRoundRow:
    features: FeatureVector
    reference_prediction: str
    actual: str


TEST_ROUND_HEADER = FEATURE_HEADER[:-1] + ["ReferencePrediction", "Actual"]


def load_test_round(path) -> list[TestRoundRow]:
    """Load a held-out test round: the attribute columns plus the reference
    prediction and the manually assigned class."""
    path = Path(path)
    out = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _check_header(list(reader.fieldnames or []), TEST_ROUND_HEADER, path)
        for lineno, record in enumerate(reader, 2):
            where = f"{path}:{lineno}"
            fv = _row_to_vector(record, where, None)
            out.append(TestRoundRow(fv, _label(record["ReferencePrediction"], where), _label(record["Actual"], where)))
    return out


def sample_tweets(corpus: list[Tweet], n: int, seed: int, ledger: set) -> list[Tweet]:
    """Draw ``n`` tweets not yet in ``ledger`` and record their ids there."""
    pool = [t for t in corpus if t.id not in ledger]
    if n > len(pool):
        raise ValueError(f"requested {n} tweets but only {len(pool)} remain unfetched")
    if n < 0:
        raise ValueError("n must be non-negative")
    random.Random(seed).shuffle(pool)
    picked = pool[:n]
    ledger.update(t.id for t in picked)
    return picked


def read_ledger(path) -> set[int]:
    path = Path(path)
    if not path.exists():
        return set()
    return {int(line) for line in path.read_text().split() if line.strip()}


def write_ledger(ids: Iterable[int], path) -> None:
    Path(path).write_text("".join(f"{i}\n" for i in sorted(ids)))


def data_path(name: str) -> Path:
    return Path(str(resources.files("tweetpromo") / "data" / name))


def fixture_tweets() -> list[Tweet]:
    """The 38 training tweets (row 22 is a simulated placeholder)."""
    return load_tweets(data_path("tweets.jsonl"))


def training_table() -> Dataset:
    return load_feature_csv(data_path("training.csv"))
