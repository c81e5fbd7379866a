"""Term lexicons for domain inference and reply sentiment.

Two plain-text formats live under data/:

domains.lex    [Domain Name] section headers, one lowercase term per line.
sentiment.lex  term<TAB>+1 or term<TAB>-1, one per line.

Both allow blank lines and # comments.  Terms are single tokens; scoring
tokenizes text with the same pattern, so a term that would not survive
tokenization is rejected at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

TOKEN_RE = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> list[str]:
    return TOKEN_RE.findall(text.lower())


class LexiconFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DomainLexicon:
    """Domain name -> set of single-token terms."""

    terms: dict[str, frozenset[str]]

    def __post_init__(self):
        if not self.terms:
            raise LexiconFormatError("lexicon has no domains")

    @property
    def domains(self) -> tuple[str, ...]:
        return tuple(sorted(self.terms))

    def hit_counts(self, text: str) -> dict[str, int]:
        """Token occurrences per domain; every occurrence counts."""
        tokens = tokenize(text)
        counts: dict[str, int] = {}
        for domain, vocabulary in self.terms.items():
            hits = sum(1 for tok in tokens if tok in vocabulary)
            if hits:
                counts[domain] = hits
        return counts


@dataclass(frozen=True)
class SentimentLexicon:
    """Token -> polarity, +1 or -1."""

    polarity: dict[str, int]

    def __post_init__(self):
        bad = {t: p for t, p in self.polarity.items() if p not in (1, -1)}
        if bad:
            raise LexiconFormatError(f"polarity must be +1 or -1: {bad}")

    def score(self, text: str, gain: float = 1.0) -> float:
        """Signed sentiment in [-1, 1]: gain * (pos - neg) / total tokens."""
        tokens = tokenize(text)
        if not tokens:
            return 0.0
        pos = sum(1 for t in tokens if self.polarity.get(t) == 1)
        neg = sum(1 for t in tokens if self.polarity.get(t) == -1)
        raw = gain * (pos - neg) / len(tokens)
        return max(-1.0, min(1.0, raw))


def _clean_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_no, line


def parse_domain_lexicon(text: str) -> DomainLexicon:
    terms: dict[str, set[str]] = {}
    current: str | None = None
    for line_no, line in _clean_lines(text):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise LexiconFormatError(f"line {line_no}: empty domain name")
            terms.setdefault(current, set())
            continue
        if current is None:
            raise LexiconFormatError(f"line {line_no}: term before any [Domain] header")
        term = line.lower()
        if tokenize(term) != [term]:
            raise LexiconFormatError(f"line {line_no}: {line!r} is not a single token")
        terms[current].add(term)
    return DomainLexicon(terms={d: frozenset(v) for d, v in terms.items()})


def parse_sentiment_lexicon(text: str) -> SentimentLexicon:
    polarity: dict[str, int] = {}
    for line_no, line in _clean_lines(text):
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(f"line {line_no}: expected term<TAB>polarity")
        term, value = parts[0].lower().strip(), parts[1].strip()
        if tokenize(term) != [term]:
            raise LexiconFormatError(f"line {line_no}: {term!r} is not a single token")
        if value not in ("+1", "1", "-1"):
            raise LexiconFormatError(f"line {line_no}: polarity {value!r} not +1/-1")
        polarity[term] = 1 if value in ("+1", "1") else -1
    if not polarity:
        raise LexiconFormatError("sentiment lexicon is empty")
    return SentimentLexicon(polarity=polarity)


def load_domain_lexicon(path: str | Path) -> DomainLexicon:
    return parse_domain_lexicon(Path(path).read_text(encoding="utf-8"))


def load_sentiment_lexicon(path: str | Path) -> SentimentLexicon:
    return parse_sentiment_lexicon(Path(path).read_text(encoding="utf-8"))


def _builtin(name: str) -> str:
    return resources.files("domcred.data").joinpath(name).read_text(encoding="utf-8")


def builtin_domain_lexicon() -> DomainLexicon:
    return parse_domain_lexicon(_builtin("domains.lex"))


def builtin_sentiment_lexicon() -> SentimentLexicon:
    return parse_sentiment_lexicon(_builtin("sentiment.lex"))
