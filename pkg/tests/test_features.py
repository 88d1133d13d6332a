import pytest

from tweetpromo.cleanse import CleanTweet, UrlResolution, normalize
from tweetpromo.corpus import Tweet
from tweetpromo.features import FilteredTweetError, UrlVerdict, analyze_urls, body_punctuation, extract


def test_azure_blog_url():
    v = analyze_urls(["https://azure.microsoft.com/blog/announcing-azure-service-fabric-5-5-and-sdk-2-5/"])
    assert (v.has_url, v.microsoft_specific, v.evidence) == (True, True, "host-substring")


def test_no_urls():
    assert analyze_urls([]) == UrlVerdict(False, False)


def test_competitor_title():
    v = analyze_urls([UrlResolution("http://zpr.io/P6Qf2", "https://blogs.oracle.com/x",
                                    "Oracle Bare Metal Cloud Services Are Now Available")])
    assert (v.has_url, v.microsoft_specific) == (True, False)


def test_title_evidence():
    v = analyze_urls([UrlResolution("http://bit.ly/a", "https://news.example.com/p", "Azure gets faster")])
    assert v.microsoft_specific and v.evidence == "title-substring"


def test_brand_and_competitor_mixed_is_not_specific():
    assert not analyze_urls(["https://example.com/azure-vs-aws"]).microsoft_specific


def test_failed_resolution_uses_original():
    v = analyze_urls([UrlResolution("http://bit.ly/azure", error="timeout")])
    assert v.has_url and v.microsoft_specific


def test_fifth_tweet_attributes(tweets, resolver, engine):
    fv = extract(normalize(tweets[4], resolver), engine)
    assert fv.binary_flags()[:9] == (True, True, True, False, False, False, True, False, False)


def test_first_tweet_attributes(tweets, resolver, engine):
    fv = extract(normalize(tweets[0], resolver), engine)
    assert fv.contains_keyword and fv.mentions_competitor and fv.contains_benefit
    assert fv.binary_flags()[:9] == (True, True, True, False, False, False, True, True, True)


def test_hello_world(engine):
    fv = extract(normalize(Tweet(1, "hello world")), engine)
    assert not any(fv.binary_flags())
    assert fv.intent_score == pytest.approx(0.880797, abs=1e-6)


def test_url_colon_is_not_body_colon(engine):
    fv = extract(normalize(Tweet(1, "read this https://azure.microsoft.com/blog/x")), engine)
    assert fv.contains_url and not fv.contains_colon


def test_emoticons_are_not_punctuation():
    assert ":" not in body_punctuation("scaling :) and ;-) nice")
    assert ":" in body_punctuation("Now Generally Available: gateway")


def test_filtered_tweet_rejected(engine):
    clean = CleanTweet(Tweet(9, "hola amigos"), "hola amigos", (), kept=False)
    with pytest.raises(FilteredTweetError, match="tweet filtered"):
        extract(clean, engine)


def test_extract_is_order_independent(tweets, resolver, engine):
    usable = [t for t in tweets if not t.simulated]
    fwd = {t.id: extract(normalize(t, resolver), engine) for t in usable}
    rev = {t.id: extract(normalize(t, resolver), engine) for t in reversed(usable)}
    assert fwd == rev
