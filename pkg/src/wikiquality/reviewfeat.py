"""Review features from revision histories, plus the ProbReview fixed point.

A "review" is one revision. Occasional users edited the article fewer than
four times; the most active users are the top ceil(5%) by edit count, at
least one. A revert is a revision whose content hash already occurred
earlier in the same history. Three months is exactly 90 days.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .types import FeatureVector, RevisionHistory, UserKind

OCCASIONAL_EDIT_LIMIT = 4
RECENT_WINDOW = timedelta(days=90)

REVIEW_FEATURE_NAMES = [
    "age_days", "age_per_review", "reviews_per_day", "reviews_per_user",
    "reviews_per_user_stddev", "discussion_count", "review_count", "user_count",
    "registered_user_count", "anonymous_user_count", "occasional_user_count",
    "registered_user_rate", "anonymous_user_rate", "occasional_user_rate",
    "registered_anonymous_user_ratio",
    "registered_review_count", "anonymous_review_count", "occasional_review_count",
    "registered_review_rate", "anonymous_review_rate", "occasional_review_rate",
    "registered_anonymous_review_ratio",
    "revert_count", "revert_review_ratio", "diversity", "modified_lines_rate",
    "last_3mo_review_count", "last_3mo_review_rate",
    "most_active_review_count", "most_active_review_rate",
]


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


@dataclass
class UserActivity:
    user_key: str
    kind: UserKind
    edit_count: int

    @property
    def is_occasional(self) -> bool:
        return self.edit_count < OCCASIONAL_EDIT_LIMIT


def user_activity(history: RevisionHistory) -> dict[str, UserActivity]:
    """Per-user edit counts; the kind comes from the user's first revision."""
    users: dict[str, UserActivity] = {}
    for rev in history.revisions:
        entry = users.get(rev.user_key)
        if entry is None:
            users[rev.user_key] = UserActivity(rev.user_key, rev.user_kind, 1)
        else:
            entry.edit_count += 1
    return users


def lcs_length(a: list[str], b: list[str]) -> int:
    """Longest common subsequence length over lines (trimmed, vectorized DP)."""
    lo = 0
    while lo < len(a) and lo < len(b) and a[lo] == b[lo]:
        lo += 1
    hi = 0
    while (hi < len(a) - lo and hi < len(b) - lo and a[-1 - hi] == b[-1 - hi]):
        hi += 1
    a, b = a[lo : len(a) - hi], b[lo : len(b) - hi]
    if not a or not b:
        return lo + hi
    # Hash lines to ints for fast numpy comparison. Rows stay monotone, so
    # LCS(i, j) = max(LCS(i-1, j), max over matches k<=j of LCS(i-1, k-1)+1)
    # vectorizes as a running maximum.
    symbols = {line: i for i, line in enumerate(dict.fromkeys(a + b))}
    av = np.array([symbols[x] for x in a])
    bv = np.array([symbols[x] for x in b])
    prev = np.zeros(len(bv) + 1, dtype=np.int64)
    for x in av:
        candidates = np.where(bv == x, prev[:-1] + 1, 0)
        row = np.maximum.accumulate(np.maximum(candidates, prev[1:]))
        prev = np.concatenate(([0], row))
    return int(prev[-1]) + lo + hi


def modified_lines_rate(text_now: str | None, text_3mo: str | None) -> float:
    """Changed (inserted + deleted) lines over current lines; 0.0 sentinel."""
    if text_now is None or text_3mo is None:
        return 0.0
    now_lines = text_now.splitlines()
    old_lines = text_3mo.splitlines()
    if not now_lines:
        return 0.0
    lcs = lcs_length(old_lines, now_lines)
    changed = (len(old_lines) - lcs) + (len(now_lines) - lcs)
    return changed / len(now_lines)


def review_features(history: RevisionHistory, now: datetime) -> FeatureVector:
    """The 30 per-article review features (ProbReview joins separately)."""
    revisions = history.revisions
    if not revisions:
        raise ValueError(f"empty revision history for {history.article_id!r}")
    if now < revisions[-1].timestamp:
        raise ValueError("'now' precedes the last revision")

    n_reviews = len(revisions)
    age_days = (now - revisions[0].timestamp).total_seconds() / 86400.0
    users = user_activity(history)
    n_users = len(users)
    edit_counts = [u.edit_count for u in users.values()]

    registered_users = sum(1 for u in users.values() if u.kind is UserKind.REGISTERED)
    anonymous_users = n_users - registered_users
    occasional_users = sum(1 for u in users.values() if u.is_occasional)

    registered_reviews = sum(
        1 for r in revisions if users[r.user_key].kind is UserKind.REGISTERED
    )
    anonymous_reviews = n_reviews - registered_reviews
    occasional_reviews = sum(1 for r in revisions if users[r.user_key].is_occasional)

    seen_hashes: set[str] = set()
    reverts = 0
    for rev in revisions:
        if rev.content_hash in seen_hashes:
            reverts += 1
        seen_hashes.add(rev.content_hash)

    window_start = now - RECENT_WINDOW
    recent = sum(1 for r in revisions if r.timestamp >= window_start)

    top_k = max(1, math.ceil(0.05 * n_users))
    by_activity = sorted(users.values(), key=lambda u: (-u.edit_count, u.user_key))
    most_active = {u.user_key for u in by_activity[:top_k]}
    most_active_reviews = sum(1 for r in revisions if r.user_key in most_active)

    mean_edits = n_reviews / n_users
    stddev = math.sqrt(sum((c - mean_edits) ** 2 for c in edit_counts) / n_users)

    return {
        "age_days": age_days,
        "age_per_review": age_days / n_reviews,
        "reviews_per_day": _ratio(n_reviews, age_days),
        "reviews_per_user": n_reviews / n_users,
        "reviews_per_user_stddev": stddev,
        "discussion_count": float(history.discussion_count),
        "review_count": float(n_reviews),
        "user_count": float(n_users),
        "registered_user_count": float(registered_users),
        "anonymous_user_count": float(anonymous_users),
        "occasional_user_count": float(occasional_users),
        "registered_user_rate": registered_users / n_users,
        "anonymous_user_rate": anonymous_users / n_users,
        "occasional_user_rate": occasional_users / n_users,
        "registered_anonymous_user_ratio": _ratio(registered_users, anonymous_users),
        "registered_review_count": float(registered_reviews),
        "anonymous_review_count": float(anonymous_reviews),
        "occasional_review_count": float(occasional_reviews),
        "registered_review_rate": registered_reviews / n_reviews,
        "anonymous_review_rate": anonymous_reviews / n_reviews,
        "occasional_review_rate": occasional_reviews / n_reviews,
        "registered_anonymous_review_ratio": _ratio(registered_reviews, anonymous_reviews),
        "revert_count": float(reverts),
        "revert_review_ratio": reverts / n_reviews,
        "diversity": n_users / n_reviews,
        "modified_lines_rate": modified_lines_rate(
            history.snapshot_text_now, history.snapshot_text_3mo
        ),
        "last_3mo_review_count": float(recent),
        "last_3mo_review_rate": recent / n_reviews,
        "most_active_review_count": float(most_active_reviews),
        "most_active_review_rate": most_active_reviews / n_reviews,
    }


@dataclass
class ProbReviewScores:
    article_quality: dict[str, float]
    user_authority: dict[str, float]
    iterations: int
    converged: bool


def prob_review(
    histories: dict[str, RevisionHistory],
    max_iterations: int = 100,
    tol: float = 1e-8,
) -> ProbReviewScores:
    """Mutual reinforcement between article quality and reviewer authority.

    quality(a) sums the authority of a's distinct reviewers; authority(u)
    sums the quality of the articles u reviewed. Both vectors start uniform
    at 1.0 and are max-norm normalized every round.
    """
    if not histories:
        raise ValueError("prob_review needs at least one history")
    if max_iterations < 1 or tol <= 0:
        raise ValueError("max_iterations must be >= 1 and tol > 0")

    articles = sorted(histories)
    users = sorted({r.user_key for h in histories.values() for r in h.revisions})
    user_index = {u: i for i, u in enumerate(users)}
    # Distinct (article, reviewer) incidence as index arrays.
    art_idx, usr_idx = [], []
    for ai, article in enumerate(articles):
        for user in sorted({r.user_key for r in histories[article].revisions}):
            art_idx.append(ai)
            usr_idx.append(user_index[user])
    art_idx = np.asarray(art_idx, dtype=np.intp)
    usr_idx = np.asarray(usr_idx, dtype=np.intp)

    quality = np.ones(len(articles))
    authority = np.ones(len(users)) if users else np.zeros(0)
    iterations = 0
    converged = False
    for _ in range(max_iterations):
        iterations += 1
        new_quality = np.zeros_like(quality)
        np.add.at(new_quality, art_idx, authority[usr_idx])
        peak = new_quality.max()
        if peak > 0:
            new_quality /= peak
        new_authority = np.zeros_like(authority)
        np.add.at(new_authority, usr_idx, new_quality[art_idx])
        peak = new_authority.max() if len(new_authority) else 0.0
        if peak > 0:
            new_authority /= peak
        change = max(
            float(np.abs(new_quality - quality).max()),
            float(np.abs(new_authority - authority).max()) if len(authority) else 0.0,
        )
        quality, authority = new_quality, new_authority
        if change < tol:
            converged = True
            break
    return ProbReviewScores(
        article_quality={a: float(q) for a, q in zip(articles, quality)},
        user_authority={u: float(s) for u, s in zip(users, authority)},
        iterations=iterations,
        converged=converged,
    )
