"""Word resources: gloss dictionary, sentiment lexicon, noun list.

All three load from plain UTF-8 text files ('#' lines are comments)
and are immutable after loading, so lookups are thread-safe.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedLine, ScoreOutOfRange
from .textproc import split_sentences, tokenize


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


def _data_lines(path: str | Path):
    """Yield (line_no, line) skipping blank and comment lines."""
    with open(path, encoding="utf-8-sig") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield line_no, line


@dataclass(frozen=True)
class GlossDictionary:
    """term -> gloss text; terms lowercase and unique."""

    entries: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def gloss(self, term: str) -> str | None:
        return self.entries.get(term.lower())


@dataclass(frozen=True)
class SentimentLexicon:
    """term -> (pos_score, neg_score), both in [0, 1]."""

    entries: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class NounLexicon:
    """Set of lowercase words treated as nouns."""

    entries: frozenset[str] = frozenset()

    def __len__(self) -> int:
        return len(self.entries)


def load_gloss_dictionary(path: str | Path) -> GlossDictionary:
    """Load `term<TAB>gloss` lines; later duplicates win."""
    entries: dict[str, str] = {}
    for line_no, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise MalformedLine(line_no, f"expected term<TAB>gloss, got {len(fields)} fields")
        term, gloss = fields
        term = term.strip().lower()
        if not term:
            raise MalformedLine(line_no, "empty term")
        entries[term] = gloss.strip()
    return GlossDictionary(entries=entries)


def gloss_first_k_sentences(gloss_dict: GlossDictionary, term: str, k: int) -> list[str]:
    """Tokens of the first k sentences of a term's gloss; [] on a miss."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    gloss = gloss_dict.gloss(term)
    if gloss is None:
        return []
    sentences = split_sentences(gloss)[:k]
    return tokenize(" ".join(sentences))


def load_sentiment_lexicon(path: str | Path) -> SentimentLexicon:
    """Load `term<TAB>pos<TAB>neg` lines.

    A term listed on several lines (one per word sense) ends up with
    the mean of its per-line scores.
    """
    sums: dict[str, tuple[float, float, int]] = {}
    for line_no, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise MalformedLine(line_no, f"expected term<TAB>pos<TAB>neg, got {len(fields)} fields")
        term = fields[0].strip().lower()
        if not term:
            raise MalformedLine(line_no, "empty term")
        try:
            pos, neg = float(fields[1]), float(fields[2])
        except ValueError as exc:
            raise MalformedLine(line_no, f"non-numeric score: {exc}") from exc
        for score in (pos, neg):
            if not 0.0 <= score <= 1.0:
                raise ScoreOutOfRange(line_no, score)
        old_pos, old_neg, n = sums.get(term, (0.0, 0.0, 0))
        sums[term] = (old_pos + pos, old_neg + neg, n + 1)
    entries = {term: (p / n, m / n) for term, (p, m, n) in sums.items()}
    return SentimentLexicon(entries=entries)


def load_noun_lexicon(path: str | Path) -> NounLexicon:
    """Load one word per line."""
    words = set()
    for _line_no, line in _data_lines(path):
        word = line.strip().lower()
        if word:
            words.add(word)
    return NounLexicon(entries=frozenset(words))


def polarity(lexicon: SentimentLexicon, word: str) -> Polarity:
    """Positive/negative by score comparison; ties and misses are neutral."""
    scores = lexicon.entries.get(word.lower())
    if scores is None:
        return Polarity.NEUTRAL
    pos, neg = scores
    if pos > neg:
        return Polarity.POSITIVE
    if neg > pos:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


def is_noun(lexicon: NounLexicon, word: str) -> bool:
    """Surface-form membership test (no stemming fallback)."""
    return word.lower() in lexicon.entries
