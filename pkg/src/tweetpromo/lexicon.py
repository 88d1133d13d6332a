"""Phrase-list lexicon and token-level phrase matching.

Phrases are matched over token sequences (not characters) with an
Aho-Corasick automaton, so a scan is linear in the number of tokens no
matter how many phrases are loaded.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import URL_RE, clean_url, data_path

CATEGORIES = (
    "Announcement",
    "CloudBenefit",
    "AzureCompetitor",
    "AzureFeature",
    "CloudFunction",
    "EqualComparison",
    "NegComparison",
    "PosComparison",
    "QuantifiedImpactPatterns",
)
COMPARISON_CATEGORIES = ("PosComparison", "NegComparison", "EqualComparison")

# Single-word comparators that are too common to count on their own.
AMBIGUOUS_COMPARATORS = frozenset({"or", "any", "either", "even"})

PUNCTUATION = set("!?:,.;()")
_QUOTES = "\"'“”‘’`"
_DROP = "…"


@dataclass(frozen=True, order=True)
class Match:
    start: int
    end: int
    category: str
    phrase: str

    @property
    def token_span(self) -> tuple[int, int]:
        return (self.start, self.end)


def _split_chunk(chunk: str) -> list[str]:
    out: list[str] = []
    word: list[str] = []

    def flush():
        if word:
            out.append("".join(word))
            word.clear()

    n = len(chunk)
    for i, ch in enumerate(chunk):
        prev = chunk[i - 1] if i else ""
        nxt = chunk[i + 1] if i + 1 < n else ""
        if ch in PUNCTUATION:
            if ch in ".," and prev.isdigit() and nxt.isdigit():
                word.append(ch)
                continue
            flush()
            out.append(ch)
        elif ch in _QUOTES:
            # apostrophes survive only between two word characters
            if word and prev.isalnum() and nxt.isalnum():
                word.append("'")
            else:
                flush()
        elif ch in _DROP:
            flush()
        else:
            word.append(ch)
    flush()
    return out


def tokenize(text: str) -> list[str]:
    """Split text into lowercase tokens.

    Whitespace separates chunks; ``! ? : , . ; ( )`` become standalone
    tokens except for digit groups like ``5.5``. URLs and ``w/`` stay whole.
    """
    tokens: list[str] = []
    for chunk in text.split():
        if chunk.lower() == "w/":
            tokens.append("w/")
            continue
        m = URL_RE.search(chunk)
        if m:
            url = clean_url(m.group(0))
            at = chunk.find(url, m.start()) if url else -1
            if at >= 0:
                tokens.extend(_split_chunk(chunk[:at]))
                tokens.append(url)
                tokens.extend(_split_chunk(chunk[at + len(url):]))
                continue
        tokens.extend(_split_chunk(chunk))
    return [t.lower() for t in tokens]


def match_key(token: str) -> str:
    """Normalise a token for lexicon lookup (handles, hashtags, possessives)."""
    key = token.lower().replace("’", "'").lstrip("@#")
    if key.endswith("'s") and len(key) > 2:
        key = key[:-2]
    return key


def _stem_forms(word: str) -> set[str]:
    forms = {word}
    if len(word) > 3 and not word.endswith("ss"):
        if word.endswith("es"):
            forms.add(word[:-2])
        if word.endswith("s"):
            forms.add(word[:-1])
    return forms


def word_variants(word: str) -> set[str]:
    """All token spellings that fold onto ``word`` (one trailing s/es)."""
    out = set()
    for base in _stem_forms(word):
        out.update((base, base + "s", base + "es"))
    return out


class TokenAutomaton:
    """Aho-Corasick automaton whose alphabet is token keys."""

    def __init__(self, patterns: Iterable[tuple[Sequence[str], object]]):
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        self._out: list[list[tuple[int, object]]] = [[]]
        for words, payload in patterns:
            self._add(tuple(words), payload)
        self._build()

    def _add(self, words: tuple[str, ...], payload) -> None:
        state = 0
        for w in words:
            nxt = self._goto[state].get(w)
            if nxt is None:
                nxt = len(self._goto)
                self._goto[state][w] = nxt
                self._goto.append({})
                self._fail.append(0)
                self._out.append([])
            state = nxt
        entry = (len(words), payload)
        if entry not in self._out[state]:
            self._out[state].append(entry)

    def _build(self) -> None:
        queue = deque(self._goto[0].values())
        while queue:
            state = queue.popleft()
            for sym, nxt in self._goto[state].items():
                queue.append(nxt)
                f = self._fail[state]
                while f and sym not in self._goto[f]:
                    f = self._fail[f]
                cand = self._goto[f].get(sym, 0)
                self._fail[nxt] = cand if cand != nxt else 0
                self._out[nxt] = self._out[nxt] + [o for o in self._out[self._fail[nxt]] if o not in self._out[nxt]]

    def scan(self, keys: Sequence[str]):
        """Yield ``(start, end, payload)`` for every pattern occurrence."""
        state = 0
        for i, sym in enumerate(keys):
            while state and sym not in self._goto[state]:
                state = self._fail[state]
            state = self._goto[state].get(sym, 0)
            for length, payload in self._out[state]:
                yield i + 1 - length, i + 1, payload


class Lexicon:
    """Immutable phrase lists keyed by category, with a prebuilt matcher."""

    def __init__(self, categories: Mapping[str, Iterable[str]]):
        cats: dict[str, tuple[str, ...]] = {}
        for name, phrases in categories.items():
            if name not in CATEGORIES:
                raise ValueError(f"unknown lexicon category {name!r}")
            seen: list[str] = []
            for p in phrases:
                p = " ".join(p.lower().split())
                if not p:
                    raise ValueError(f"empty phrase in category {name}")
                if p not in seen:
                    seen.append(p)
            cats[name] = tuple(seen)
        self.categories: Mapping[str, tuple[str, ...]] = cats
        patterns = []
        for name, phrases in cats.items():
            for phrase in phrases:
                words = [match_key(w) for w in phrase.split()]
                for combo in product(*(sorted(word_variants(w)) for w in words)):
                    patterns.append((combo, (name, phrase)))
        self._automaton = TokenAutomaton(patterns)

    def __getitem__(self, category: str) -> tuple[str, ...]:
        return self.categories.get(category, ())

    def scan(self, tokens: Sequence[str]):
        keys = [match_key(t) for t in tokens]
        for start, end, (category, phrase) in self._automaton.scan(keys):
            yield Match(start, end, category, phrase)


_SECTION_RE = re.compile(r"^\[(\w+)\]$")


def load_lexicon(path=None) -> Lexicon:
    """Read a sectioned ``.lex`` file; defaults to the bundled phrase lists."""
    path = Path(path) if path is not None else data_path("lexicon/default.lex")
    categories: dict[str, list[str]] = {}
    current = None
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current not in CATEGORIES:
                raise ValueError(f"{path}:{lineno}: unknown category [{current}]")
            categories.setdefault(current, [])
        elif current is None:
            raise ValueError(f"{path}:{lineno}: phrase outside any [Category] section")
        else:
            categories[current].append(line)
    return Lexicon(categories)


def find_matches(tokens: Sequence[str], lexicon: Lexicon) -> list[Match]:
    """Phrase matches over ``tokens``, longest-per-start within a category."""
    best: dict[tuple[str, int], Match] = {}
    for m in lexicon.scan(tokens):
        key = (m.category, m.start)
        cur = best.get(key)
        if cur is None or m.end > cur.end:
            best[key] = m
    matches = sorted(best.values(), key=lambda m: (m.start, -m.end, CATEGORIES.index(m.category)))

    comparisons = [m for m in matches if m.category in COMPARISON_CATEGORIES]

    def gated(m: Match) -> bool:
        if m.category not in COMPARISON_CATEGORIES or m.phrase not in AMBIGUOUS_COMPARATORS:
            return False
        return not any(o is not m and (o.end == m.start or o.start == m.end) for o in comparisons)

    return [m for m in matches if not gated(m)]


_NUMBER = r"\d+(?:[.,]\d+)*"
_PERCENT_RE = re.compile(rf"^{_NUMBER}%$")
_CURRENCY_RE = re.compile(rf"^[$€£¥]{_NUMBER}[kmb]?$")
_MULTIPLIER_RE = re.compile(rf"^{_NUMBER}x$")
_NUMBER_RE = re.compile(rf"^{_NUMBER}$")
QUANTITY_NOUNS = frozenset({"locations", "users", "customers", "x", "times", "billion", "million"})


def quantified_impact(tokens: Sequence[str]) -> list[Match]:
    hits = []
    for i, tok in enumerate(tokens):
        if _PERCENT_RE.match(tok) or _CURRENCY_RE.match(tok) or _MULTIPLIER_RE.match(tok):
            hits.append(Match(i, i + 1, "QuantifiedImpactPatterns", tok))
        elif _NUMBER_RE.match(tok) and i + 1 < len(tokens):
            nxt = tokens[i + 1]
            if nxt in QUANTITY_NOUNS or nxt + "s" in QUANTITY_NOUNS:
                hits.append(Match(i, i + 2, "QuantifiedImpactPatterns", f"{tok} {nxt}"))
    return hits
