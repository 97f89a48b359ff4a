"""End-to-end feature extraction: corpus in, feature matrix out.

Parsing and tagging are pure per-article and may run in a process pool; the
trigram selector is fitted once on the labeled articles (or loaded from a
file) and the ProbReview iteration runs globally over all histories. Raw
per-article trigram counts are kept so experiments can refit the selection
inside each cross-validation fold.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

import numpy as np

from . import registry
from .corpus import LoadResult
from .ml import FeatureMatrix, TrigramCounts
from .netfeat import network_features, pagerank
from .postag import TaggedDocument, pos_tag
from .readability import ReadabilityCounts, readability_features
from .reviewfeat import REVIEW_FEATURE_NAMES, ProbReviewScores, prob_review, review_features
from .stylefeat import (
    TrigramSelector,
    char_trigrams,
    fit_trigram_selector,
    pos_trigrams,
    style_scalar_features,
    trigram_features,
)
from .textfeat import length_features, structure_features
from .types import Article, DocumentStructure
from .wikitext import parse_wikitext


@dataclass
class ExtractionResult:
    matrix: FeatureMatrix
    selector: Optional[TrigramSelector]
    trigram_counts: dict[str, TrigramCounts]
    prob_scores: Optional[ProbReviewScores]
    flags: dict[str, list[str]] = field(default_factory=dict)


def parse_and_tag(article: Article) -> tuple[DocumentStructure, TaggedDocument]:
    doc = parse_wikitext(article.wikitext)
    return doc, pos_tag(doc)


def _count_trigrams(tagged: TaggedDocument) -> TrigramCounts:
    chars = Counter(char_trigrams(tagged.text))
    poses = Counter(" ".join(g) for g in pos_trigrams(tagged))
    return {
        "char": dict(sorted(chars.items())),
        "char_total": sum(chars.values()),
        "pos": dict(sorted(poses.items())),
        "pos_total": sum(poses.values()),
    }


def extract_features(
    load_result: LoadResult,
    now: datetime,
    selector: Optional[TrigramSelector] = None,
    m: int = registry.DEFAULT_M,
    n: int = registry.DEFAULT_N,
    prob_review_max_iterations: int = 100,
    prob_review_tol: float = 1e-8,
    damping: float = 0.85,
    jobs: int = 1,
) -> ExtractionResult:
    """Compute every registry feature for every article.

    Articles with an empty or missing revision history keep zero sentinels in
    the review columns and are flagged rather than dropped.
    """
    articles = load_result.articles
    histories = load_result.histories
    graph = load_result.graph
    flags = {k: list(v) for k, v in load_result.flags.items()}

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parsed = list(pool.map(parse_and_tag, articles, chunksize=8))
    else:
        parsed = [parse_and_tag(a) for a in articles]

    if selector is None:
        labeled = [(tagged, a.label) for a, (_, tagged) in zip(articles, parsed) if a.label]
        if len({label for _, label in labeled}) >= 2:
            selector = fit_trigram_selector(
                [t for t, _ in labeled], [l for _, l in labeled], m=m, n=n
            )
    if selector is not None:
        m, n = selector.m, selector.n

    nonempty = {aid: h for aid, h in histories.items() if h.revisions}
    prob_scores = None
    if nonempty:
        prob_scores = prob_review(nonempty, prob_review_max_iterations, prob_review_tol)

    ranks = pagerank(graph, damping=damping) if graph.nodes else {}
    net = network_features(graph, ranks) if graph.nodes else {}
    zero_net = {name: 0.0 for name in registry.NETWORK_FEATURES}
    zero_review = {name: 0.0 for name in REVIEW_FEATURE_NAMES}

    columns = registry.feature_names(m, n)
    rows = []
    trigram_counts: dict[str, TrigramCounts] = {}
    for article, (doc, tagged) in zip(articles, parsed):
        fv = {}
        fv.update(length_features(doc))
        fv.update(structure_features(doc))
        fv.update(style_scalar_features(tagged))
        if selector is not None:
            fv.update(trigram_features(tagged, selector))
        else:
            for name in registry.style_feature_names(m, n):
                fv.setdefault(name, 0.0)
        fv.update(readability_features(ReadabilityCounts.from_document(doc)))
        history = histories.get(article.id)
        if history is not None and history.revisions:
            fv.update(review_features(history, now))
        else:
            fv.update(zero_review)
            flags.setdefault(article.id, []).append("review_features_zeroed")
        fv["prob_review"] = (
            prob_scores.article_quality.get(article.id, 0.0) if prob_scores else 0.0
        )
        fv.update(net.get(article.id, zero_net))
        if doc.anomaly_count:
            flags.setdefault(article.id, []).append(
                f"markup_anomalies:{doc.anomaly_count}"
            )
        rows.append([fv[name] for name in columns])
        trigram_counts[article.id] = _count_trigrams(tagged)

    labels = [a.label for a in articles]
    matrix = FeatureMatrix(
        ids=[a.id for a in articles],
        columns=columns,
        values=np.array(rows) if rows else np.zeros((0, len(columns))),
        labels=labels if any(labels) else None,
    )
    matrix.require_finite()
    return ExtractionResult(
        matrix=matrix,
        selector=selector,
        trigram_counts=trigram_counts,
        prob_scores=prob_scores,
        flags=flags,
    )
