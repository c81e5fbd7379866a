"""Domain-weighted credibility features, per user, per domain, per period.

Engagement on a tweet (retweets, favorites, replies, reply sentiment) is
split across the tweet's inferred domains in proportion to their annotation
scores, accumulated per user, then min-max or max normalized for ranking.
The 12-column matrix feeds the classifiers; the normalized columns feed the
per-period credibility tables.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .annotate import AnnotatedReply, AnnotatedTweet, DomainAnnotation
from .corpus.types import Dataset, GroundTruthLabels, PeriodSlice, UserProfile

FEATURE_COLUMNS = (
    "domain_favorite_count",
    "domain_replies_count",
    "domain_retweet_count",
    "followers_count",
    "friends_count",
    "retweet_count",
    "favorite_count",
    "replies_count",
    "count_domain_pos",
    "count_domain_neg",
    "sum_domain_pos",
    "sum_domain_neg",
)

DAYS_PER_YEAR = 365.25
MIN_AGE_YEARS = 1.0 / DAYS_PER_YEAR

POOLED = 0  # period index for whole-timeline accumulation


def relativeness_weights(
    annotations: Iterable[DomainAnnotation],
) -> dict[str, float]:
    """Scores normalized to weights that sum to 1; {} when nothing to weight.

    A tweet scored (1, 0.5, 0.5) across three domains weighs them
    (0.5, 0.25, 0.25), so 10 retweets distribute as (5, 2.5, 2.5).
    """
    scored = [(a.label, a.score) for a in annotations if a.score > 0]
    total = sum(s for _, s in scored)
    if total <= 0:
        return {}
    return {label: score / total for label, score in scored}


def distribute(value: float, weights: Mapping[str, float]) -> dict[str, float]:
    """Split a value across domains by weight; masses sum back to the value."""
    return {domain: value * w for domain, w in weights.items()}


@dataclass(frozen=True)
class UserDomainFeatures:
    """Accumulated domain-attributed engagement for one (user, domain, period)."""

    user_id: str
    domain: str
    period: int
    r: float = 0.0  # distributed retweet mass
    l: float = 0.0  # distributed favorite mass
    p: float = 0.0  # distributed reply mass
    sp: float = 0.0  # distributed positive sentiment sum
    sn: float = 0.0  # distributed negative sentiment sum, <= 0
    count_pos: float = 0.0  # distributed count of positive replies
    count_neg: float = 0.0  # distributed count of negative replies
    domain_tweet_count: int = 0

    def __post_init__(self):
        for name in ("r", "l", "p", "sp", "count_pos", "count_neg"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.sn > 0:
            raise ValueError("sn must be <= 0")

    @property
    def s(self) -> float:
        return self.sp - abs(self.sn)


@dataclass(frozen=True)
class UserGlobalFeatures:
    """Domain-independent features: profile counts, account age, totals."""

    user_id: str
    followers_count: int
    friends_count: int
    age_years: float
    ff_r: float
    retweet_total: int = 0
    favorite_total: int = 0
    replies_total: int = 0

    def __post_init__(self):
        if self.age_years <= 0:
            raise ValueError("age_years must be > 0")


def profile_age_years(profile: UserProfile, capture_at: datetime) -> float:
    """Fractional account age in years at capture, floored at one day."""
    if profile.created_at >= capture_at:
        raise ValueError(f"user {profile.user_id} created at or after capture_at")
    days = (capture_at - profile.created_at).total_seconds() / 86400.0
    return max(days / DAYS_PER_YEAR, MIN_AGE_YEARS)


def compute_ffr(profile: UserProfile, capture_at: datetime) -> float:
    """Followers-friends ratio over account age; 1/age on an exact tie."""
    age = profile_age_years(profile, capture_at)
    diff = profile.followers_count - profile.friends_count
    if diff == 0:
        return 1.0 / age
    return diff / age


@dataclass
class _Accumulator:
    r: float = 0.0
    l: float = 0.0
    p: float = 0.0
    sp: float = 0.0
    sn: float = 0.0
    count_pos: float = 0.0
    count_neg: float = 0.0
    domain_tweet_count: int = 0


def accumulate_domain_features(
    dataset: Dataset,
    annotated_tweets: Iterable[AnnotatedTweet],
    annotated_replies: Iterable[AnnotatedReply],
    period: PeriodSlice | None = None,
) -> dict[tuple[str, str], UserDomainFeatures]:
    """Accumulate distributed engagement per (user, domain) over one selection.

    Tweets contribute their own engagement counts; replies contribute their
    sentiment to the parent tweet's author, split by the parent's weights.
    A reply belongs to the selection by its own timestamp, so late replies to
    an earlier tweet count in the period they were written.  Tweets with no
    usable annotation contribute nothing.  Iteration follows the dataset's
    id ordering, fixing floating-point summation order.
    """
    weights_by_tweet = {
        t.tweet_id: relativeness_weights(t.merged_domains) for t in annotated_tweets
    }
    sentiment_by_reply = {r.reply_id: r.sentiment for r in annotated_replies}
    tweets_by_id = dataset.tweets_by_id()

    period_index = period.index if period is not None else POOLED
    cells: dict[tuple[str, str], _Accumulator] = {}

    def cell(user_id: str, domain: str) -> _Accumulator:
        return cells.setdefault((user_id, domain), _Accumulator())

    for tweet in dataset.tweets:
        if period is not None and tweet.tweet_id not in period.tweet_ids:
            continue
        weights = weights_by_tweet.get(tweet.tweet_id)
        if not weights:
            continue
        for domain, w in weights.items():
            acc = cell(tweet.author_id, domain)
            acc.r += tweet.retweet_count * w
            acc.l += tweet.favorite_count * w
            acc.p += tweet.replies_count * w
            acc.domain_tweet_count += 1

    for reply in dataset.replies:
        if period is not None and reply.reply_id not in period.reply_ids:
            continue
        sentiment = sentiment_by_reply.get(reply.reply_id, 0.0)
        if sentiment == 0.0:
            continue
        parent = tweets_by_id.get(reply.parent_tweet_id)
        if parent is None:
            continue
        weights = weights_by_tweet.get(parent.tweet_id)
        if not weights:
            continue
        for domain, w in weights.items():
            acc = cell(parent.author_id, domain)
            if sentiment > 0:
                acc.sp += sentiment * w
                acc.count_pos += w
            else:
                acc.sn += sentiment * w
                acc.count_neg += w

    return {
        (user_id, domain): UserDomainFeatures(
            user_id=user_id,
            domain=domain,
            period=period_index,
            r=acc.r,
            l=acc.l,
            p=acc.p,
            sp=acc.sp,
            sn=acc.sn,
            count_pos=acc.count_pos,
            count_neg=acc.count_neg,
            domain_tweet_count=acc.domain_tweet_count,
        )
        for (user_id, domain), acc in sorted(cells.items())
    }


def compute_global_features(
    dataset: Dataset, period: PeriodSlice | None = None
) -> dict[str, UserGlobalFeatures]:
    """Profile features plus in-selection engagement totals, per active user.

    A user is active when they have at least one tweet in the selection.
    The followers-friends ratio uses the dataset capture timestamp and does
    not vary by period.
    """
    totals: dict[str, list[int]] = {}
    for tweet in dataset.tweets:
        if period is not None and tweet.tweet_id not in period.tweet_ids:
            continue
        entry = totals.setdefault(tweet.author_id, [0, 0, 0])
        entry[0] += tweet.retweet_count
        entry[1] += tweet.favorite_count
        entry[2] += tweet.replies_count

    out: dict[str, UserGlobalFeatures] = {}
    for user in dataset.users:
        if user.user_id not in totals:
            continue
        rt, fav, rep = totals[user.user_id]
        out[user.user_id] = UserGlobalFeatures(
            user_id=user.user_id,
            followers_count=user.followers_count,
            friends_count=user.friends_count,
            age_years=profile_age_years(user, dataset.capture_at),
            ff_r=compute_ffr(user, dataset.capture_at),
            retweet_total=rt,
            favorite_total=fav,
            replies_total=rep,
        )
    return out


def _scale_by_max(values: Mapping[str, float]) -> dict[str, float]:
    if not values:
        return {}
    top = max(values.values())
    if top <= 0:
        return {k: 0.0 for k in values}
    return {k: v / top for k, v in values.items()}


def _min_max(values: Mapping[str, float]) -> dict[str, float]:
    if not values:
        return {}
    lo, hi = min(values.values()), max(values.values())
    if hi == lo:
        return {k: 1.0 for k in values}
    return {k: (v - lo) / (hi - lo) for k, v in values.items()}


def normalize_r(values: Mapping[str, float]) -> dict[str, float]:
    """Per-domain retweet mass over the domain maximum; zero max maps to 0."""
    return _scale_by_max(values)


def normalize_l(values: Mapping[str, float]) -> dict[str, float]:
    """Per-domain favorite mass over the domain maximum; zero max maps to 0."""
    return _scale_by_max(values)


def normalize_p(values: Mapping[str, float]) -> dict[str, float]:
    """Per-domain reply mass over the domain maximum; zero max maps to 0."""
    return _scale_by_max(values)


def normalize_s(values: Mapping[str, float]) -> dict[str, float]:
    """Min-max over the domain's sentiment totals; a constant column maps to 1."""
    return _min_max(values)


def normalize_ffr(values: Mapping[str, float]) -> dict[str, float]:
    """Min-max over ALL users' ratios; a constant column maps to 1."""
    return _min_max(values)


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows of the 12 engineered columns for one domain and period selection."""

    domain: str
    period: int
    user_ids: tuple[str, ...]
    x: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.x.shape != (len(self.user_ids), len(FEATURE_COLUMNS)):
            raise ValueError(f"matrix shape {self.x.shape} does not match rows/columns")
        if self.labels is not None and len(self.labels) != len(self.user_ids):
            raise ValueError("labels length does not match rows")

    @property
    def n_rows(self) -> int:
        return len(self.user_ids)

    def column(self, name: str) -> np.ndarray:
        return self.x[:, FEATURE_COLUMNS.index(name)]


def assemble_matrix(
    domain: str,
    period: int,
    domain_features: Mapping[tuple[str, str], UserDomainFeatures],
    global_features: Mapping[str, UserGlobalFeatures],
    labels: GroundTruthLabels | None = None,
) -> FeatureMatrix:
    """Build the per-user matrix for one domain from accumulated features.

    Every selection-active user (one with global features) gets a row; users
    with no engagement attributed to the domain keep zeros in the domain
    columns.  With labels the rows are restricted to labeled users and the
    label column is attached; without, all active users appear unlabeled.
    """
    user_ids = sorted(global_features)
    if labels is not None:
        user_ids = [u for u in user_ids if u in labels.labels]
    if not user_ids:
        raise ValueError(f"no users to assemble for domain {domain!r}")

    rows = np.zeros((len(user_ids), len(FEATURE_COLUMNS)))
    for i, user_id in enumerate(user_ids):
        g = global_features[user_id]
        d = domain_features.get((user_id, domain))
        rows[i] = (
            d.l if d else 0.0,
            d.p if d else 0.0,
            d.r if d else 0.0,
            g.followers_count,
            g.friends_count,
            g.retweet_total,
            g.favorite_total,
            g.replies_total,
            d.count_pos if d else 0.0,
            d.count_neg if d else 0.0,
            d.sp if d else 0.0,
            d.sn if d else 0.0,
        )

    return FeatureMatrix(
        domain=domain,
        period=period,
        user_ids=tuple(user_ids),
        x=rows,
        labels=tuple(labels.labels[u] for u in user_ids) if labels is not None else None,
    )


def save_matrix(matrix: FeatureMatrix, path: str | Path) -> None:
    """Write the matrix as CSV: user_id, domain, period, the 12 columns, label."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["user_id", "domain", "period", *FEATURE_COLUMNS]
        if matrix.labels is not None:
            header.append("label")
        writer.writerow(header)
        for i, user_id in enumerate(matrix.user_ids):
            row = [user_id, matrix.domain, matrix.period]
            row += [repr(float(v)) for v in matrix.x[i]]
            if matrix.labels is not None:
                row.append(matrix.labels[i])
            writer.writerow(row)


def load_matrix(path: str | Path) -> FeatureMatrix:
    """Read a matrix written by save_matrix; values round-trip exactly."""
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        labeled = header[-1] == "label"
        expected = ["user_id", "domain", "period", *FEATURE_COLUMNS]
        if header[: len(expected)] != expected:
            raise ValueError(f"unexpected header {header!r}")
        user_ids, values, labels = [], [], []
        domain, period = "", POOLED
        for row in reader:
            user_ids.append(row[0])
            domain, period = row[1], int(row[2])
            values.append([float(v) for v in row[3 : 3 + len(FEATURE_COLUMNS)]])
            if labeled:
                labels.append(row[-1])
    return FeatureMatrix(
        domain=domain,
        period=period,
        user_ids=tuple(user_ids),
        x=np.array(values, dtype=float).reshape(len(user_ids), len(FEATURE_COLUMNS)),
        labels=tuple(labels) if labeled else None,
    )
