"""Attribute extraction: turns a cleansed tweet into the 11-attribute row."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .cleanse import CleanTweet, UrlResolution
from .corpus import PROMOTIONAL, URL_RE, FeatureVector
from .intent import IntentAnalysis, IntentEngine

BRAND_TERMS = ("microsoft", "azure")
COMPETITOR_TERMS = ("aws", "amazon", "google", "oracle", "gcp", "facebook", "skype", "ec2")

_EMOTICON_RE = re.compile(r"(?<!\S)[:;=8][-o^']?[()\[\]dDpP3|/\\*]+(?!\S)")


class FilteredTweetError(ValueError):
    """Raised when extracting from a tweet the cleanser dropped."""


@dataclass(frozen=True)
class UrlVerdict:
    has_url: bool
    microsoft_specific: bool
    evidence: str = "none"

    def __post_init__(self):
        if self.microsoft_specific and not self.has_url:
            raise ValueError("microsoft_specific requires has_url")


def _brand_evidence(text: str) -> bool:
    text = text.lower()
    return any(b in text for b in BRAND_TERMS) and not any(c in text for c in COMPETITOR_TERMS)


def analyze_urls(resolved_urls: Iterable[Union[UrlResolution, str]]) -> UrlVerdict:
    """Decide whether any link points at Microsoft/Azure material.

    A link counts when its address or page title names Microsoft or Azure
    and neither mentions a competitor.
    """
    resolved = [UrlResolution(r, r) if isinstance(r, str) else r for r in resolved_urls]
    if not resolved:
        return UrlVerdict(False, False)
    for r in resolved:
        address, title = r.target.lower(), r.title.lower()
        if any(c in address or c in title for c in COMPETITOR_TERMS):
            continue
        if any(b in address for b in BRAND_TERMS):
            return UrlVerdict(True, True, "host-substring")
        if any(b in title for b in BRAND_TERMS):
            return UrlVerdict(True, True, "title-substring")
    return UrlVerdict(True, False)


def body_punctuation(text: str) -> str:
    """Text with URLs and emoticons removed, for punctuation attributes."""
    text = URL_RE.sub(" ", text)
    return _EMOTICON_RE.sub(" ", text)


def extract(clean: CleanTweet, intent_engine: IntentEngine, label: Optional[str] = None,
            analysis: Optional[IntentAnalysis] = None) -> FeatureVector:
    if not clean.kept:
        raise FilteredTweetError(f"tweet filtered: {clean.original.id} was dropped by the cleanser")
    urls = analyze_urls(clean.resolved_urls)
    body = body_punctuation(clean.text)
    analysis = analysis or intent_engine.analyze(clean.text)
    tags = analysis.tags
    return FeatureVector(
        contains_url=urls.has_url,
        microsoft_url=urls.microsoft_specific,
        contains_azure_word=tags.has_feature,
        contains_exclamation="!" in body,
        contains_colon=":" in body,
        contains_question_mark="?" in body,
        contains_keyword=tags.has_announcement,
        mentions_competitor=tags.has_competitor,
        contains_benefit=tags.has_benefit,
        intent=analysis.result.intent == PROMOTIONAL,
        intent_score=analysis.result.score,
        label=label,
    )
