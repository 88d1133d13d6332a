import pytest
from hypothesis import given, strategies as st

from tweetpromo.lexicon import (
    AMBIGUOUS_COMPARATORS,
    COMPARISON_CATEGORIES,
    TokenAutomaton,
    find_matches,
    load_lexicon,
    quantified_impact,
    tokenize,
    word_variants,
)


_LEX = load_lexicon()


def found(text, lexicon):
    return {(m.category, m.phrase) for m in find_matches(tokenize(text), lexicon)}


@pytest.mark.parametrize("text, tokens", [
    ("Announcing Azure Service Fabric 5.5!", ["announcing", "azure", "service", "fabric", "5.5", "!"]),
    ("", []),
    ("(recently updated!)", ["(", "recently", "updated", "!", ")"]),
    ("Azure's 'serverless compute'", ["azure's", "serverless", "compute"]),
    ("Insights: see https://x.com/a?b=1, ok", ["insights", ":", "see", "https://x.com/a?b=1", ",", "ok"]),
    ("1,400 users; fine.", ["1,400", "users", ";", "fine", "."]),
])
def test_tokenize(text, tokens):
    assert tokenize(text) == tokens


def test_tokenize_shorthand():
    toks = tokenize("cross-platform cloud power w/ MS")
    assert "w/" in toks and "ms" in toks and "cross-platform" in toks


def test_lexicon_loads_all_categories(lexicon):
    for cat in ("Announcement", "CloudBenefit", "AzureCompetitor", "AzureFeature", "CloudFunction",
                "EqualComparison", "NegComparison", "PosComparison"):
        assert lexicon[cat], cat
    assert "severless" in lexicon["CloudBenefit"] and "serverless" in lexicon["CloudBenefit"]
    for phrases in lexicon.categories.values():
        assert len(phrases) == len(set(phrases))
        assert all(p == p.lower() and p for p in phrases)


def test_bad_lexicon_files(tmp_path):
    p = tmp_path / "x.lex"
    p.write_text("orphan\n")
    with pytest.raises(ValueError, match="outside"):
        load_lexicon(p)
    p.write_text("[Nope]\nx\n")
    with pytest.raises(ValueError, match="unknown category"):
        load_lexicon(p)


def test_announcement_and_feature(lexicon):
    got = found("Announcing Azure Service Fabric 5.5", lexicon)
    assert ("Announcement", "announcing") in got and ("AzureFeature", "azure") in got


def test_comparison_and_competitor(lexicon):
    got = found("better than AWS", lexicon)
    assert ("PosComparison", "better than") in got and ("AzureCompetitor", "aws") in got


def test_empty_tokens(lexicon):
    assert find_matches([], lexicon) == []


def test_longest_match_per_start(lexicon):
    ms = find_matches(tokenize("get started with tables"), lexicon)
    ann = [m for m in ms if m.category == "Announcement"]
    assert [(m.phrase, m.token_span) for m in ann] == [("get started", (0, 2))]


def test_phrase_in_several_categories(lexicon):
    got = found("we develop things", lexicon)
    assert ("Announcement", "develop") in got and ("CloudBenefit", "develop") in got


def test_suffix_fold(lexicon):
    assert ("CloudBenefit", "help") in found("Security Center helps", lexicon)
    assert ("CloudBenefit", "manage") in found("it manages keys", lexicon)
    assert ("CloudBenefit", "assess") in found("assesses risk", lexicon)
    assert ("AzureCompetitor", "aws") not in found("awsome", lexicon)


def test_word_variants():
    assert word_variants("help") == {"help", "helps", "helpes"}
    assert {"manage", "manages"} <= word_variants("manages")
    assert word_variants("aws") == {"aws", "awss", "awses"}


def test_token_boundary(lexicon):
    assert ("AzureCompetitor", "aws") not in found("That was AWSome", lexicon)
    assert ("AzureCompetitor", "aws") in found("That was AWS", lexicon)


def test_handles_and_possessives(lexicon):
    assert ("AzureFeature", "azure") in found("on @Azure today", lexicon)
    assert ("AzureFeature", "azure") in found("Azure's journey", lexicon)


def test_ambiguous_comparator_needs_neighbour(lexicon):
    assert not any(c in COMPARISON_CATEGORIES for c, _ in found("stay on-prem or go", lexicon))
    assert ("EqualComparison", "or") in found("better than or equal to", lexicon)


def _sentence(category, phrase):
    if phrase in AMBIGUOUS_COMPARATORS:
        return f"we said {phrase} better than that today"
    return f"we said {phrase} today"


def test_every_phrase_matches_itself(lexicon):
    for category, phrases in lexicon.categories.items():
        for phrase in phrases:
            assert (category, phrase) in found(_sentence(category, phrase), lexicon), (category, phrase)


_vocab = st.sampled_from([
    "Azure", "AWS", "better", "than", "Now", "Available", "Helps", "GET", "Started", "or", "MS",
    "w/", "Microsoft", "cloud", "Google", "Resource", "Manager", "!", "The", "Same", "awsome",
])


@given(st.lists(_vocab, max_size=15))
def test_case_invariance(words):
    text = " ".join(words)
    assert find_matches(tokenize(text.lower()), _LEX) == find_matches(tokenize(text), _LEX)
    assert find_matches(tokenize(text.upper()), _LEX) == find_matches(tokenize(text), _LEX)


@given(st.lists(_vocab, max_size=15))
def test_deterministic(words):
    toks = tokenize(" ".join(words))
    assert find_matches(toks, _LEX) == find_matches(list(toks), _LEX)



def _naive_scan(patterns, keys):
    out = set()
    for words, payload in patterns:
        L = len(words)
        for i in range(len(keys) - L + 1):
            if tuple(keys[i:i + L]) == tuple(words):
                out.add((i, i + L, payload))
    return out


@given(
    st.lists(st.lists(st.sampled_from("abc"), min_size=1, max_size=3), min_size=1, max_size=8),
    st.lists(st.sampled_from("abcd"), max_size=20),
)
def test_automaton_matches_naive_scan(patterns, keys):
    pats = [(tuple(p), "".join(p)) for p in patterns]
    auto = TokenAutomaton(pats)
    assert set(auto.scan(keys)) == _naive_scan(pats, keys)


@pytest.mark.parametrize("text, hits", [
    ("90% of fortune 500 use MS azure cloud", ["90%"]),
    ("has 38 locations, more than both AWS and Google", ["38 locations"]),
    ("no numbers here", []),
    ("saved $5 and ran 10x faster for 2 million users", ["$5", "10x", "2 million"]),
    ("SDK 2.5 ships", []),
])
def test_quantified_impact(text, hits):
    got = quantified_impact(tokenize(text))
    assert [m.phrase for m in got] == hits
    assert all(m.category == "QuantifiedImpactPatterns" for m in got)
