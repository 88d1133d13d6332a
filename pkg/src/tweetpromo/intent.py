"""Rule-based promotional-intent model.

Entity tags come from the phrase lexicon; a linear evidence sum over a
handful of rules gives the intent, and ``0.5 + 0.5 * tanh(|E|)`` gives the
confidence score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Optional, Sequence

from .corpus import NONE, PROMOTIONAL
from .lexicon import COMPARISON_CATEGORIES, Lexicon, Match, find_matches, quantified_impact, tokenize

BRAND_WORDS = frozenset({"azure", "microsoft", "ms"})


class Direction(str, Enum):
    AZURE_OVER_COMPETITOR = "azure_over_competitor"
    COMPETITOR_OVER_AZURE = "competitor_over_azure"
    EQUAL = "equal"
    NONE = "none"


@dataclass(frozen=True)
class EntityTags:
    matches: tuple[Match, ...] = ()
    has_feature: bool = False
    has_function: bool = False
    has_benefit: bool = False
    has_announcement: bool = False
    has_competitor: bool = False
    has_quantified: bool = False
    azure_positive: bool = False

    def __post_init__(self):
        if self.azure_positive and not (
            self.has_feature and (self.has_benefit or self.has_announcement or self.has_function)
        ):
            raise ValueError("azure_positive requires a feature plus a benefit, announcement or function")


@dataclass(frozen=True)
class IntentResult:
    intent: str
    score: float


@dataclass(frozen=True)
class RuleWeights:
    w_pos: float = 1.2
    w_ann: float = 0.6
    w_cmp: float = 1.0
    w_qi: float = 0.4
    v_comp: float = 1.5
    v_dir: float = 1.5
    v_generic: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ValueError(f"rule weight {f.name} must be finite")


def _is_brand_phrase(m: Match) -> bool:
    return any(w in BRAND_WORDS for w in m.phrase.split())


def _competitor_owned(feature: Match, competitors: Sequence[Match], tokens: Sequence[str]) -> bool:
    # product names preceded by a rival brand ("Google Cloud Resource Manager")
    if _is_brand_phrase(feature):
        return False
    for c in competitors:
        gap = feature.start - c.end
        if 0 <= gap <= 1 and not any(t.lstrip("@") in BRAND_WORDS for t in tokens[c.end:feature.start]):
            return True
    return False


def tag_entities(tokens: Sequence[str], lexicon: Lexicon) -> EntityTags:
    matches = find_matches(tokens, lexicon) + quantified_impact(tokens)
    competitors = [m for m in matches if m.category == "AzureCompetitor"]
    matches = [
        m for m in matches
        if not (m.category == "AzureFeature" and _competitor_owned(m, competitors, tokens))
    ]
    matches.sort(key=lambda m: (m.start, -m.end, m.category))
    cats = {m.category for m in matches}
    has_feature = "AzureFeature" in cats
    has_benefit = "CloudBenefit" in cats
    has_function = "CloudFunction" in cats
    has_announcement = "Announcement" in cats
    anchored = any(m.category == "Announcement" and _is_brand_phrase(m) for m in matches)
    azure_positive = has_feature and (has_benefit or has_announcement or has_function)
    azure_positive = azure_positive or (anchored and has_feature and (has_benefit or has_function))
    return EntityTags(
        matches=tuple(matches),
        has_feature=has_feature,
        has_function=has_function,
        has_benefit=has_benefit,
        has_announcement=has_announcement,
        has_competitor="AzureCompetitor" in cats,
        has_quantified="QuantifiedImpactPatterns" in cats,
        azure_positive=azure_positive,
    )


def comparison_direction(tokens: Sequence[str], matches: Sequence[Match]) -> Direction:
    """Which side a comparison phrase favours, judged from the nearest
    product mentions on either side of the first comparator."""
    comparators = sorted((m for m in matches if m.category in COMPARISON_CATEGORIES), key=lambda m: m.start)
    if not comparators:
        return Direction.NONE
    comp = comparators[0]
    mentions = [m for m in matches if m.category in ("AzureFeature", "AzureCompetitor")]
    before = [m for m in mentions if m.end <= comp.start]
    after = [m for m in mentions if m.start >= comp.end]
    if not before or not after:
        return Direction.NONE
    subject = max(before, key=lambda m: (m.end, m.start))
    obj = min(after, key=lambda m: (m.start, -m.end))
    subj_azure = subject.category == "AzureFeature"
    obj_azure = obj.category == "AzureFeature"
    if subj_azure == obj_azure:
        return Direction.NONE
    if comp.category == "EqualComparison":
        return Direction.EQUAL
    favours_subject = comp.category == "PosComparison"
    if favours_subject == subj_azure:
        return Direction.AZURE_OVER_COMPETITOR
    return Direction.COMPETITOR_OVER_AZURE


def rule_contributions(tags: EntityTags, direction: Direction,
                       weights: RuleWeights = RuleWeights()) -> list[tuple[str, float]]:
    """Every rule that fired, with its signed contribution to the evidence."""
    rules = [
        ("azure_positive", weights.w_pos, tags.azure_positive),
        ("announcement+feature", weights.w_ann, tags.has_announcement and tags.has_feature),
        ("azure_over_competitor", weights.w_cmp, direction == Direction.AZURE_OVER_COMPETITOR),
        ("quantified+feature", weights.w_qi, tags.has_quantified and tags.has_feature),
        ("competitor_benefit", -weights.v_comp,
         tags.has_benefit and tags.has_competitor and not tags.has_feature),
        ("competitor_over_azure", -weights.v_dir, direction == Direction.COMPETITOR_OVER_AZURE),
        ("not_azure_specific", -weights.v_generic, not tags.has_feature),
    ]
    return [(name, value) for name, value, fired in rules if fired]


def predict_intent(tags: EntityTags, direction: Direction = Direction.NONE,
                   weights: RuleWeights = RuleWeights()) -> IntentResult:
    evidence = sum(v for _, v in rule_contributions(tags, direction, weights))
    intent = PROMOTIONAL if evidence > 0 else NONE
    return IntentResult(intent, 0.5 + 0.5 * math.tanh(abs(evidence)))


@dataclass(frozen=True)
class IntentAnalysis:
    tokens: tuple[str, ...]
    tags: EntityTags
    direction: Direction
    contributions: tuple[tuple[str, float], ...]
    result: IntentResult


class IntentEngine:
    def __init__(self, lexicon: Lexicon, weights: Optional[RuleWeights] = None):
        self.lexicon = lexicon
        self.weights = weights or RuleWeights()

    def analyze(self, text: str) -> IntentAnalysis:
        tokens = tokenize(text)
        tags = tag_entities(tokens, self.lexicon)
        direction = comparison_direction(tokens, tags.matches)
        contributions = rule_contributions(tags, direction, self.weights)
        return IntentAnalysis(tuple(tokens), tags, direction, tuple(contributions),
                              predict_intent(tags, direction, self.weights))

    def predict(self, text: str) -> IntentResult:
        return self.analyze(text).result
