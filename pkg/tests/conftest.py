"""Shared synthetic-corpus builder for pipeline, CLI and acceptance tests."""

import json
import random

import pytest

LABELS = ["Stub", "Start", "C", "B", "GA", "A", "FA"]

_WORDS = (
    "the battle of river mouth was fought between two armies near the old "
    "fort and the town grew around the crossing while merchants traded grain "
    "timber and wool along the coast under a treaty that held for decades "
    "historians describe the campaign in detail and the garrison kept careful "
    "records of supplies reviews and repairs during every siege season"
).split()


def _sentence(rng, lo=6, hi=14):
    words = [rng.choice(_WORDS) for _ in range(rng.randrange(lo, hi))]
    return " ".join(words).capitalize() + rng.choice([".", ".", ".", "?", "!"])


def _paragraph(rng, sentences=3):
    return " ".join(_sentence(rng) for _ in range(sentences))


def make_wikitext(rng, quality):
    """Richer markup for higher quality classes, so features carry signal."""
    depth = LABELS.index(quality)
    parts = [_paragraph(rng, sentences=1 + depth)]
    for s in range(1 + depth):
        parts.append(f"\n== Section {s} ==\n" + _paragraph(rng, sentences=2 + depth))
        if rng.random() < 0.5 and depth >= 2:
            parts.append(f"\n=== Detail {s} ===\n" + _paragraph(rng))
        if rng.random() < 0.3 * depth:
            parts.append(f"[[File:image_{s}.png|thumb|caption]]")
        if rng.random() < 0.5:
            parts.append(f"Linked to [[target {rng.randrange(40)}]].<ref>Source {s}.</ref>")
    parts.append("\n== External links ==\n* [http://example.org/a Site]")
    return "\n".join(parts)


def build_corpus_files(tmp_path, per_class=2, seed=7, now="2023-06-01T00:00:00Z"):
    """Write a complete labeled corpus; returns the path mapping."""
    rng = random.Random(seed)
    articles, revisions, discussions, snapshots, red_links = [], [], [], [], []
    edges = []
    ids = []
    for label in LABELS:
        for i in range(per_class):
            art_id = f"{label.lower()}-{i}"
            ids.append((art_id, label))
    user_pool = [(f"user{u}", False) for u in range(6)] + [(f"10.0.0.{u}", True) for u in range(4)]

    for art_id, label in ids:
        articles.append({
            "id": art_id,
            "title": art_id.replace("-", " ").title(),
            "wikitext": make_wikitext(rng, label),
            "label": label,
            "translations": rng.randrange(0, 12),
            "link_count": rng.randrange(0, 30),
        })
        n_revs = rng.randrange(4, 18)
        hashes = [f"{art_id}-v{v}" for v in range(max(2, n_revs - 2))]
        day = 0.0
        for r in range(n_revs):
            day += rng.uniform(0.5, 40.0)
            user, anon = rng.choice(user_pool)
            revisions.append({
                "article_id": art_id,
                "revision_id": f"{art_id}-r{r}",
                "timestamp": f"2022-01-01T00:00:00Z",
                "user": user,
                "anonymous": anon,
                "sha1": rng.choice(hashes),
                "size": rng.randrange(100, 5000),
            })
        discussions.append({"article_id": art_id, "discussion_count": rng.randrange(0, 9)})
        lines_now = [_sentence(rng) for _ in range(6)]
        lines_old = list(lines_now)
        for _ in range(rng.randrange(0, 4)):
            lines_old[rng.randrange(len(lines_old))] = _sentence(rng)
        snapshots.append({
            "article_id": art_id,
            "text_now": "\n".join(lines_now),
            "text_3mo": "\n".join(lines_old),
        })
        red_links.append({"article_id": art_id, "red_links": rng.randrange(0, 6)})

    # deterministic distinct timestamps per article
    counters = {}
    for rev in revisions:
        k = rev["article_id"]
        counters[k] = counters.get(k, 0) + 1
        salt = sum(ord(c) for c in k)
        day_offset = counters[k] * 17 + (salt % 13)
        rev["timestamp"] = f"2022-{1 + (counters[k] % 11):02d}-{1 + (day_offset % 27):02d}T12:00:00Z"

    id_list = [a["id"] for a in articles]
    for a in id_list:
        for b in rng.sample(id_list, k=min(len(id_list), rng.randrange(1, 6))):
            if a != b:
                edges.append((a, b))

    paths = {
        "articles": tmp_path / "articles.jsonl",
        "revisions": tmp_path / "revisions.jsonl",
        "graph": tmp_path / "edges.tsv",
        "discussions": tmp_path / "discussions.jsonl",
        "snapshots": tmp_path / "snapshots.jsonl",
        "red_links": tmp_path / "red_links.jsonl",
    }
    paths["articles"].write_text("\n".join(json.dumps(a) for a in articles) + "\n")
    paths["revisions"].write_text("\n".join(json.dumps(r) for r in revisions) + "\n")
    paths["graph"].write_text("\n".join(f"{a}\t{b}" for a, b in edges) + "\n")
    paths["discussions"].write_text("\n".join(json.dumps(d) for d in discussions) + "\n")
    paths["snapshots"].write_text("\n".join(json.dumps(s) for s in snapshots) + "\n")
    paths["red_links"].write_text("\n".join(json.dumps(r) for r in red_links) + "\n")
    paths["now"] = now
    return paths


@pytest.fixture
def corpus_paths(tmp_path):
    return build_corpus_files(tmp_path)
