"""Classify tweets as product-promotional with a phrase-list intent model
feeding a Naive Bayes classifier."""

from .bayes import BayesModel, fit, predict
from .cleanse import CleanTweet, FixtureResolver, LiveResolver, UrlResolution, english_filter, normalize
from .corpus import Dataset, FeatureVector, Tweet, load_feature_csv, load_tweets, sample_tweets
from .evaluation import attribute_report, compute_metrics, cross_validate, stratified_folds
from .features import analyze_urls, extract
from .intent import IntentEngine, RuleWeights, comparison_direction, predict_intent, tag_entities
from .lexicon import Lexicon, find_matches, load_lexicon, quantified_impact, tokenize

__version__ = "0.1.0"

__all__ = [
    "BayesModel",
    "fit",
    "predict",
    "CleanTweet",
    "FixtureResolver",
    "LiveResolver",
    "UrlResolution",
    "english_filter",
    "normalize",
    "Dataset",
    "FeatureVector",
    "Tweet",
    "load_feature_csv",
    "load_tweets",
    "sample_tweets",
    "attribute_report",
    "compute_metrics",
    "cross_validate",
    "stratified_folds",
    "analyze_urls",
    "extract",
    "IntentEngine",
    "RuleWeights",
    "comparison_direction",
    "predict_intent",
    "tag_entities",
    "Lexicon",
    "find_matches",
    "load_lexicon",
    "quantified_impact",
    "tokenize",
]
