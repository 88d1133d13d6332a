import math

import pytest
from hypothesis import given, strategies as st

from tweetpromo.corpus import NONE, PROMOTIONAL
from tweetpromo.intent import (
    Direction,
    EntityTags,
    RuleWeights,
    comparison_direction,
    predict_intent,
    rule_contributions,
    tag_entities,
)
from tweetpromo.lexicon import tokenize


def tags_for(text, lexicon):
    return tag_entities(tokenize(text), lexicon)


def direction_for(text, lexicon):
    toks = tokenize(text)
    return comparison_direction(toks, tag_entities(toks, lexicon).matches)


def test_azure_positive_from_benefit(lexicon):
    t = tags_for("How Azure Security Center helps reveal a Cyberattack", lexicon)
    assert t.has_feature and t.has_benefit and t.azure_positive


def test_competitor_benefit(lexicon):
    t = tags_for("New – AWS Step Functions – Build Distributed Applications", lexicon)
    assert t.has_competitor and t.has_benefit and not t.has_feature and not t.azure_positive


def test_empty_text_has_no_tags(lexicon):
    assert tags_for("", lexicon) == EntityTags()


def test_rival_product_names_are_not_azure_features(lexicon):
    t = tags_for("What's new with Google Cloud Resource Manager", lexicon)
    assert not t.has_feature and t.has_competitor
    assert tags_for("Azure Resource Manager templates", lexicon).has_feature


def test_azure_positive_requires_feature():
    with pytest.raises(ValueError):
        EntityTags(has_benefit=True, azure_positive=True)


@pytest.mark.parametrize("text, expected", [
    ("Azure is better than AWS", Direction.AZURE_OVER_COMPETITOR),
    ("AWS is better than Azure", Direction.COMPETITOR_OVER_AZURE),
    ("Azure is worse than AWS", Direction.COMPETITOR_OVER_AZURE),
    ("AWS is inferior to Azure", Direction.AZURE_OVER_COMPETITOR),
    ("Azure is equivalent to AWS", Direction.EQUAL),
    ("Azure and AWS", Direction.NONE),
    ("better than AWS", Direction.NONE),
    ("Azure is better than Microsoft", Direction.NONE),
])
def test_comparison_direction(text, expected, lexicon):
    assert direction_for(text, lexicon) is expected


def test_announcement_tweet_is_promotional(lexicon):
    t = tags_for("Announcing Azure Service Fabric 5.5", lexicon)
    assert t.azure_positive and t.has_announcement and t.has_feature
    r = predict_intent(t, Direction.NONE)
    assert r.intent == PROMOTIONAL
    # evidence 1.2 + 0.6
    assert r.score == pytest.approx(0.5 + 0.5 * math.tanh(1.8), abs=1e-12)
    assert r.score == pytest.approx(0.973403, abs=1e-6)


def test_no_tags_is_none():
    r = predict_intent(EntityTags(), Direction.NONE)
    assert r.intent == NONE
    assert r.score == pytest.approx(0.880797, abs=1e-6)


def test_competitor_benefit_is_none():
    r = predict_intent(EntityTags(has_benefit=True, has_competitor=True), Direction.NONE)
    assert r.intent == NONE
    assert dict(rule_contributions(EntityTags(has_benefit=True, has_competitor=True), Direction.NONE)) == {
        "competitor_benefit": -1.5, "not_azure_specific": -1.0}


def test_tie_is_none():
    r = predict_intent(EntityTags(has_feature=True), Direction.NONE)
    assert r.intent == NONE and r.score == 0.5


def test_weights_must_be_finite():
    with pytest.raises(ValueError):
        RuleWeights(w_pos=math.inf)


@st.composite
def entity_tags(draw):
    b = {k: draw(st.booleans()) for k in
         ("has_feature", "has_function", "has_benefit", "has_announcement", "has_competitor", "has_quantified")}
    can_pos = b["has_feature"] and (b["has_benefit"] or b["has_announcement"] or b["has_function"])
    return EntityTags(azure_positive=can_pos and draw(st.booleans()), **b)


directions = st.sampled_from(list(Direction))


@given(entity_tags(), directions)
def test_score_band(tags, direction):
    r = predict_intent(tags, direction)
    evidence = sum(v for _, v in rule_contributions(tags, direction))
    assert 0.5 <= r.score <= 1.0
    if evidence == 0:
        assert r.score == 0.5 and r.intent == NONE
    else:
        assert r.score > 0.5
        assert (r.intent == PROMOTIONAL) == (evidence > 0)


@given(entity_tags(), directions)
def test_azure_positive_monotone(tags, direction):
    if tags.azure_positive or not (tags.has_feature and (tags.has_benefit or tags.has_announcement or tags.has_function)):
        return
    before = predict_intent(tags, direction)
    after = predict_intent(EntityTags(**{**tags.__dict__, "azure_positive": True}), direction)
    assert not (before.intent == PROMOTIONAL and after.intent == NONE)


@pytest.mark.parametrize("a, b", [("Azure", "AWS"), ("Microsoft", "Google"), ("MS", "Oracle")])
def test_swapping_sides_flips_direction(a, b, lexicon):
    fwd = direction_for(f"{a} is better than {b}", lexicon)
    rev = direction_for(f"{b} is better than {a}", lexicon)
    assert fwd is Direction.AZURE_OVER_COMPETITOR and rev is Direction.COMPETITOR_OVER_AZURE
    tags = EntityTags(has_feature=True, has_competitor=True)
    w = RuleWeights()
    assert dict(rule_contributions(tags, fwd))["azure_over_competitor"] == w.w_cmp
    assert dict(rule_contributions(tags, rev))["competitor_over_azure"] == -w.v_dir


def test_engine_explains(engine):
    a = engine.analyze("Microsoft @Azure has 38 locations, more than both AWS and Google combined.")
    assert a.direction is Direction.AZURE_OVER_COMPETITOR
    assert [n for n, _ in a.contributions] == ["azure_over_competitor", "quantified+feature"]
    assert a.result.intent == PROMOTIONAL
