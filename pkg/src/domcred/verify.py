"""Built-in numeric fixtures that exercise the published reference values.

Each fixture drives real package code with small frozen inputs and checks
the results against hand-verified numbers, so a change that breaks one of
the core formulas fails loudly here.  The CLI exposes these as `verify`.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta
from typing import Callable, TextIO

from .annotate import DomainAnnotation
from .corpus.types import UserProfile, parse_timestamp
from .evaluate import ConfusionTable, metrics
from .features import (
    UserDomainFeatures,
    compute_ffr,
    distribute,
    normalize_ffr,
    normalize_p,
    normalize_r,
    relativeness_weights,
)


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    detail: str


def _check_engagement_distribution() -> str:
    annotations = (
        DomainAnnotation("Sports", 1.0),
        DomainAnnotation("Arts and Entertainment", 0.5),
        DomainAnnotation("Education", 0.5),
    )
    weights = relativeness_weights(annotations)
    expected_weights = {
        "Sports": 0.5,
        "Arts and Entertainment": 0.25,
        "Education": 0.25,
    }
    assert weights == expected_weights, f"weights {weights}"
    cases = (
        (10.0, {"Sports": 5.0, "Arts and Entertainment": 2.5, "Education": 2.5}),
        (15.0, {"Sports": 7.5, "Arts and Entertainment": 3.75, "Education": 3.75}),
        (-10.0, {"Sports": -5.0, "Arts and Entertainment": -2.5, "Education": -2.5}),
    )
    for value, expected in cases:
        got = distribute(value, weights)
        assert got == expected, f"distributing {value} gave {got}"
    return "scores (1, 0.5, 0.5): 10 -> (5, 2.5, 2.5); 15 -> (7.5, 3.75, 3.75); -10 -> (-5, -2.5, -2.5)"


_RETWEET_ROWS = (
    ("chris_radcliff", 3831.0, 1.0),
    ("nfreader", 962.0, 0.251),
    ("nukeador", 627.0, 0.164),
    ("IvorCrotty", 604.0, 0.158),
    ("LocalJoost", 398.0, 0.104),
)

_REPLY_ROWS = (
    ("tigga7d6", 1908.0, 1.0),
    ("grahamgilbert", 992.0, 0.52),
    ("Xantiriad", 992.0, 0.52),
    ("Aurynn", 985.0, 0.516),
    ("markdrew", 917.0, 0.481),
)


def _check_scaling(rows, normalize) -> str:
    values = {handle: raw for handle, raw, _ in rows}
    scaled = normalize(values)
    for handle, _, expected in rows:
        got = round(scaled[handle], 3)
        assert got == expected, f"{handle}: {got} != {expected}"
    return "; ".join(f"{raw:g} -> {expected:g}" for _, raw, expected in rows)


def _check_retweet_scaling() -> str:
    return _check_scaling(_RETWEET_ROWS, normalize_r)


def _check_reply_scaling() -> str:
    return _check_scaling(_REPLY_ROWS, normalize_p)


_SENTIMENT_ROWS = (
    ("scout2i", 75.198, -13.434, 61.764),
    ("agardnahh", 67.483, -9.570, 57.913),
    ("CodrutTurcanu", 60.068, -7.580, 52.488),
    ("johnjwall", 70.107, -21.318, 48.789),
    ("MLanghans410", 63.303, -16.022, 47.281),
)


def _check_sentiment_difference() -> str:
    for handle, sp, sn, expected in _SENTIMENT_ROWS:
        row = UserDomainFeatures(user_id=handle, domain="d", period=1, sp=sp, sn=sn)
        got = round(row.s, 3)
        assert got == expected, f"{handle}: {got} != {expected}"
    return "; ".join(f"{sp:g} - {abs(sn):g} = {s:g}" for _, sp, sn, s in _SENTIMENT_ROWS)


_RATE_ROWS = (
    ("michaelfrisby", 4150, 29, 7.0, 1.0),
    ("roseandgrey", 4686, 733, 7.0, 0.972),
    ("brettdetar", 4037, 121, 7.0, 0.966),
    ("captdirectory", 4501, 660, 7.0, 0.953),
    ("kyriiii", 4852, 119, 9.0, 0.927),
)


def _check_follower_friend_rate() -> str:
    capture = parse_timestamp("2016-01-01T00:00:00Z")
    rates = {}
    for handle, followers, friends, age_years, _ in _RATE_ROWS:
        profile = UserProfile(
            user_id=handle,
            handle=handle,
            followers_count=followers,
            friends_count=friends,
            created_at=capture - timedelta(days=age_years * 365.25),
        )
        rates[handle] = compute_ffr(profile, capture)
    top = rates["michaelfrisby"]
    assert round(top, 3) == 588.714, f"top rate {top}"

    # The published table normalizes against an unseen dataset minimum; the
    # non-top rows pin it, so recover it by least squares and check that it
    # reproduces every published normalized value.
    num = den = 0.0
    for handle, _, _, _, published in _RATE_ROWS[1:]:
        a = rates[handle] - published * top
        b = 1.0 - published
        num += a * b
        den += b * b
    floor = num / den
    assert -280.0 < floor < -255.0, f"implied minimum {floor}"
    values = dict(rates)
    values["(dataset minimum)"] = floor
    scaled = normalize_ffr(values)
    for handle, _, _, _, published in _RATE_ROWS:
        got = round(scaled[handle], 3)
        assert got == published, f"{handle}: {got} != {published}"
    return f"(4150 - 29) / 7 = 588.714; implied minimum {floor:.1f} reproduces all five scaled rates"


def _check_confusion_rates() -> str:
    report = metrics(ConfusionTable(tp=1114, fp=9, fn=0, tn=75))
    got = (
        round(report.accuracy * 100, 3),
        round(report.classification_error * 100, 3),
        round(report.precision * 100, 3),
        round(report.recall * 100, 3),
        round(report.f_score * 100, 3),
    )
    expected = (99.249, 0.751, 99.199, 100.0, 99.598)
    assert got == expected, f"rates {got} != {expected}"
    assert report.classification_error + report.accuracy == 1.0, "error + accuracy != 1"

    all_positive = metrics(ConfusionTable(tp=1113, fp=85, fn=0, tn=0))
    assert all_positive.precision == all_positive.accuracy, "all-positive: precision != accuracy"
    assert all_positive.recall == 1.0, "all-positive: recall != 100%"
    return "(1114, 9, 0, 75) -> 99.249/0.751/99.199/100.000/99.598%; all-positive table has precision = accuracy, recall 100%"


_CHECKS: tuple[tuple[str, str, Callable[[], str]], ...] = (
    (
        "engagement-distribution",
        "a tweet's engagement splits across its domains in proportion to score",
        _check_engagement_distribution,
    ),
    (
        "retweet-scaling",
        "domain retweet masses scale by the domain maximum",
        _check_retweet_scaling,
    ),
    (
        "reply-scaling",
        "domain reply masses scale by the domain maximum",
        _check_reply_scaling,
    ),
    (
        "sentiment-difference",
        "the sentiment score is the positive sum minus the negative magnitude",
        _check_sentiment_difference,
    ),
    (
        "follower-friend-rate",
        "followers minus friends over account age, min-max scaled",
        _check_follower_friend_rate,
    ),
    (
        "confusion-rates",
        "accuracy, error, precision, recall, and F from a confusion table",
        _check_confusion_rates,
    ),
)


def fixture_names() -> tuple[str, ...]:
    return tuple(name for name, _, _ in _CHECKS)


def fixture_descriptions() -> dict[str, str]:
    return {name: description for name, description, _ in _CHECKS}


def run_fixtures(names=None) -> tuple[FixtureResult, ...]:
    if names is None:
        selected = _CHECKS
    else:
        wanted = list(names)
        unknown = sorted(set(wanted) - set(fixture_names()))
        if unknown:
            raise ValueError(f"unknown fixtures: {unknown}")
        selected = tuple(c for c in _CHECKS if c[0] in wanted)
    results = []
    for name, _, check in selected:
        try:
            detail = check()
        except AssertionError as exc:
            results.append(FixtureResult(name=name, passed=False, detail=str(exc)))
        else:
            results.append(FixtureResult(name=name, passed=True, detail=detail))
    return tuple(results)


def report_fixtures(stream: TextIO, names=None) -> bool:
    """Run fixtures, print one PASS/FAIL line each, return overall success."""
    results = run_fixtures(names)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        stream.write(f"{status} {result.name}: {result.detail}\n")
    passed = sum(r.passed for r in results)
    stream.write(f"{passed}/{len(results)} fixtures passed\n")
    return passed == len(results)
