"""Core domain types shared across the feature-extraction pipeline."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterator, Optional


class QualityClass(enum.Enum):
    """The seven WikiProject quality grades, ordered Stub (worst) to FA (best)."""

    STUB = ("Stub", 0)
    START = ("Start", 1)
    C = ("C", 2)
    B = ("B", 3)
    GA = ("GA", 4)
    A = ("A", 5)
    FA = ("FA", 6)

    def __init__(self, label: str, ordinal: int):
        self.label = label
        self.ordinal = ordinal

    @classmethod
    def from_label(cls, label: str) -> "QualityClass":
        for qc in cls:
            if qc.label == label:
                return qc
        raise ValueError(f"unknown quality class label: {label!r}")

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "QualityClass":
        for qc in cls:
            if qc.ordinal == ordinal:
                return qc
        raise ValueError(f"quality class ordinal out of range: {ordinal}")


class UserKind(enum.Enum):
    REGISTERED = "registered"
    ANONYMOUS = "anonymous"


@dataclass
class Article:
    """One wikitext document plus metadata; the unit of classification."""

    id: str
    title: str
    wikitext: str
    label: Optional[QualityClass] = None
    translations: int = 0
    raw_link_count: int = 0


@dataclass
class Section:
    """A node of the section tree. ``depth`` is 1 for ``== X ==`` headings."""

    title: str
    depth: int
    body_text: str = ""
    char_size: int = 0
    children: list["Section"] = field(default_factory=list)

    def walk(self) -> Iterator["Section"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class DocumentStructure:
    """A parsed article: section tree, segmentation, and markup counts."""

    abstract_text: str = ""
    sections: list[Section] = field(default_factory=list)
    paragraphs: list[str] = field(default_factory=list)
    sentences: list[list[str]] = field(default_factory=list)
    sentence_terminals: list[str] = field(default_factory=list)
    tokens: list[str] = field(default_factory=list)
    syllable_counts: list[int] = field(default_factory=list)
    citation_count: int = 0
    external_link_count: int = 0
    internal_link_count: int = 0
    image_count: int = 0
    plain_text: str = ""
    anomaly_count: int = 0

    def iter_sections(self) -> Iterator[Section]:
        """All section nodes, depth-first in document order."""
        for top in self.sections:
            yield from top.walk()

    @property
    def text_length(self) -> int:
        """Characters of normalized plain text: abstract plus every section body."""
        return len(self.abstract_text) + sum(s.char_size for s in self.iter_sections())


@dataclass
class Revision:
    """One edit record from an article's history."""

    revision_id: str
    timestamp: datetime
    user_key: str
    user_kind: UserKind
    content_hash: str
    size_bytes: int = 0


@dataclass
class RevisionHistory:
    article_id: str
    revisions: list[Revision] = field(default_factory=list)
    discussion_count: int = 0
    snapshot_text_now: Optional[str] = None
    snapshot_text_3mo: Optional[str] = None


class LinkGraph:
    """Directed inter-article citation graph (simple digraph, no self-loops)."""

    def __init__(self):
        self.nodes: set[str] = set()
        self._succ: dict[str, set[str]] = {}
        self._pred: dict[str, set[str]] = {}
        self.red_links: dict[str, int] = {}
        self.translations: dict[str, int] = {}
        self.dropped_self_loops = 0

    def add_node(self, node: str) -> None:
        if node not in self.nodes:
            self.nodes.add(node)
            self._succ[node] = set()
            self._pred[node] = set()

    def add_edge(self, citing: str, cited: str) -> None:
        if citing == cited:
            self.dropped_self_loops += 1
            self.add_node(citing)
            return
        self.add_node(citing)
        self.add_node(cited)
        self._succ[citing].add(cited)
        self._pred[cited].add(citing)

    def successors(self, node: str) -> set[str]:
        return self._succ[node]

    def predecessors(self, node: str) -> set[str]:
        return self._pred[node]

    def out_degree(self, node: str) -> int:
        return len(self._succ[node])

    def in_degree(self, node: str) -> int:
        return len(self._pred[node])

    def edge_count(self) -> int:
        return sum(len(s) for s in self._succ.values())

    def edges(self) -> Iterator[tuple[str, str]]:
        for citing in sorted(self._succ):
            for cited in sorted(self._succ[citing]):
                yield citing, cited


# A feature vector is a plain mapping from canonical feature name to a finite
# float; group membership lives in the registry module.
FeatureVector = dict[str, float]


def check_finite(features: FeatureVector) -> None:
    """Reject NaN/infinite values; ratio sentinels must be applied upstream."""
    for name, value in features.items():
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite feature value for {name!r}: {value}")
