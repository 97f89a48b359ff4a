"""wikiquality: hand-crafted features for Wikipedia article quality grading.

The package parses wikitext, mines revision histories and the citation
graph, computes the full feature registry (length, structure, style,
readability, review, network), and trains/evaluates eight classifier
families with accuracy and ordinal MSE.
"""

from .corpus import LoadResult, load_corpus
from .ml import (
    FeatureMatrix,
    TrainedModel,
    cross_validate,
    evaluate,
    predict,
    run_experiment,
    train,
)
from .netfeat import network_features, pagerank
from .pipeline import ExtractionResult, extract_features
from .postag import TaggedDocument, pos_tag
from .readability import ReadabilityCounts, readability_features
from .registry import feature_groups, feature_names
from .reviewfeat import prob_review, review_features
from .segmentation import count_syllables, segment
from .stylefeat import TrigramSelector, fit_trigram_selector, style_scalar_features, trigram_features
from .textfeat import length_features, structure_features
from .types import (
    Article,
    DocumentStructure,
    LinkGraph,
    QualityClass,
    Revision,
    RevisionHistory,
)
from .wikitext import parse_wikitext

__version__ = "0.1.0"

__all__ = [
    "Article", "DocumentStructure", "ExtractionResult", "FeatureMatrix",
    "LinkGraph", "LoadResult", "QualityClass", "ReadabilityCounts",
    "Revision", "RevisionHistory", "TaggedDocument", "TrainedModel",
    "TrigramSelector",
    "count_syllables", "cross_validate", "evaluate", "extract_features",
    "feature_groups", "feature_names", "fit_trigram_selector",
    "length_features", "load_corpus", "network_features", "pagerank",
    "parse_wikitext", "pos_tag", "predict", "prob_review",
    "readability_features", "review_features", "run_experiment", "segment",
    "structure_features", "style_scalar_features", "train",
    "trigram_features",
]
