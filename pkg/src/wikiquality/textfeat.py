"""Length and structure features computed from a parsed document.

Every ratio applies the zero-denominator sentinel: if the denominator is
zero the feature is 0.0, keeping all vectors finite and dense.
"""

from __future__ import annotations

import math

from .types import DocumentStructure, FeatureVector


def ratio(numerator: float, denominator: float) -> float:
    """Zero-denominator sentinel: 0.0 when the denominator is zero."""
    return numerator / denominator if denominator else 0.0


def length_features(doc: DocumentStructure) -> FeatureVector:
    """Characters (spaces included), words, sentences, syllables."""
    return {
        "character_count": float(doc.text_length),
        "word_count": float(len(doc.tokens)),
        "sentence_count": float(len(doc.sentences)),
        "syllable_count": float(sum(doc.syllable_counts)),
    }


def structure_features(doc: DocumentStructure) -> FeatureVector:
    """The 21 section/citation/link/image organization features.

    Per-section denominators count section nodes at every depth; stddev is the
    population form. Citation and link densities are per character of plain
    text, image density per sentence.
    """
    all_sections = list(doc.iter_sections())
    sizes = [s.char_size for s in all_sections]
    n_sections = sum(1 for s in all_sections if s.depth == 1)
    n_subsections = sum(1 for s in all_sections if s.depth >= 2)
    n_nodes = len(all_sections)
    text_len = doc.text_length
    n_sentences = len(doc.sentences)

    mean_size = ratio(sum(sizes), n_nodes)
    if sizes:
        longest = float(max(sizes))
        shortest = float(min(sizes))
        stddev = math.sqrt(sum((s - mean_size) ** 2 for s in sizes) / len(sizes))
    else:
        longest = shortest = stddev = 0.0
    para_sizes = [len(p) for p in doc.paragraphs]

    return {
        "section_count": float(n_sections),
        "subsection_count": float(n_subsections),
        "paragraph_count": float(len(doc.paragraphs)),
        "mean_section_size": mean_size,
        "mean_paragraph_size": ratio(sum(para_sizes), len(para_sizes)),
        "longest_section_size": longest,
        "shortest_section_size": shortest,
        "longest_shortest_section_ratio": ratio(longest, shortest),
        "section_size_stddev": stddev,
        "mean_subsections_per_section": ratio(n_subsections, n_sections),
        "abstract_size": float(len(doc.abstract_text)),
        "abstract_size_article_length_ratio": ratio(len(doc.abstract_text), text_len),
        "citation_count": float(doc.citation_count),
        "citations_per_section": ratio(doc.citation_count, n_nodes),
        "citations_per_text_length": ratio(doc.citation_count, text_len),
        "external_link_count": float(doc.external_link_count),
        "external_links_per_section": ratio(doc.external_link_count, n_nodes),
        "external_links_per_text_length": ratio(doc.external_link_count, text_len),
        "image_count": float(doc.image_count),
        "images_per_section": ratio(doc.image_count, n_nodes),
        "images_per_text_length": ratio(doc.image_count, n_sentences),
    }
