"""Timeline partitioning into consecutive calendar periods.

Slices align to UTC calendar boundaries (month by default, quarter or year
optionally), start at the configured range start or the month of the first
activity, and are half-open [start, end).  Records outside the configured
range land in no slice and are counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .types import Dataset, PeriodSlice

GRANULARITIES = ("month", "quarter", "year")
_MONTHS_PER = {"month": 1, "quarter": 3, "year": 12}


@dataclass(frozen=True)
class PeriodSpec:
    """K consecutive calendar periods starting at ``start`` (or first activity)."""

    n_periods: int
    start: datetime | None = None
    granularity: str = "month"

    def __post_init__(self):
        if self.n_periods < 1:
            raise ValueError("n_periods must be >= 1")
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"unknown granularity {self.granularity!r}")
        if self.start is not None and self.start.tzinfo is None:
            raise ValueError("start must be timezone-aware")


@dataclass(frozen=True)
class PartitionReport:
    n_periods: int
    empty_periods: int
    tweets_per_period: tuple[int, ...]
    replies_per_period: tuple[int, ...]
    out_of_range_tweets: int
    out_of_range_replies: int

    def to_dict(self) -> dict:
        return {
            "n_periods": self.n_periods,
            "empty_periods": self.empty_periods,
            "tweets_per_period": list(self.tweets_per_period),
            "replies_per_period": list(self.replies_per_period),
            "out_of_range_tweets": self.out_of_range_tweets,
            "out_of_range_replies": self.out_of_range_replies,
        }


def _floor_boundary(dt: datetime, granularity: str) -> datetime:
    if granularity == "year":
        return datetime(dt.year, 1, 1, tzinfo=timezone.utc)
    month = dt.month
    if granularity == "quarter":
        month = 3 * ((month - 1) // 3) + 1
    return datetime(dt.year, month, 1, tzinfo=timezone.utc)


def _add_months(dt: datetime, months: int) -> datetime:
    total = dt.year * 12 + (dt.month - 1) + months
    return datetime(total // 12, total % 12 + 1, 1, tzinfo=timezone.utc)


def partition_periods(
    dataset: Dataset, spec: PeriodSpec
) -> tuple[tuple[PeriodSlice, ...], PartitionReport]:
    """Slice the dataset timeline into spec.n_periods consecutive periods.

    Periods are indexed 1..K.  Every tweet and reply is assigned by its own
    posted_at to at most one slice; anything before the range start or at or
    after the range end is out of range.
    """
    stamps = [t.posted_at for t in dataset.tweets] + [r.posted_at for r in dataset.replies]
    if spec.start is not None:
        first = spec.start.astimezone(timezone.utc)
    elif stamps:
        first = _floor_boundary(min(stamps), spec.granularity)
    else:
        first = _floor_boundary(dataset.capture_at, spec.granularity)

    step = _MONTHS_PER[spec.granularity]
    edges = [_add_months(first, i * step) if i else first for i in range(spec.n_periods + 1)]

    slices = []
    for i in range(spec.n_periods):
        start, end = edges[i], edges[i + 1]
        tweet_ids = frozenset(
            t.tweet_id for t in dataset.tweets if start <= t.posted_at < end
        )
        reply_ids = frozenset(
            r.reply_id for r in dataset.replies if start <= r.posted_at < end
        )
        slices.append(
            PeriodSlice(index=i + 1, start=start, end=end, tweet_ids=tweet_ids, reply_ids=reply_ids)
        )

    tweets_per = tuple(len(s.tweet_ids) for s in slices)
    replies_per = tuple(len(s.reply_ids) for s in slices)
    report = PartitionReport(
        n_periods=spec.n_periods,
        empty_periods=sum(1 for a, b in zip(tweets_per, replies_per) if a == 0 and b == 0),
        tweets_per_period=tweets_per,
        replies_per_period=replies_per,
        out_of_range_tweets=len(dataset.tweets) - sum(tweets_per),
        out_of_range_replies=len(dataset.replies) - sum(replies_per),
    )
    return tuple(slices), report
