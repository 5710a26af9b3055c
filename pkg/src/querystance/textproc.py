"""Tokenization and sentence splitting.

Normalization layer for every similarity feature: lowercase word
tokens, Porter stems, and a deliberately naive sentence splitter used
only on short dictionary glosses.
"""

from __future__ import annotations

import re

from .porter import porter_stem

__all__ = ["tokenize", "porter_stem", "stem_tokens", "split_sentences"]

# sentence ends at . ! or ? followed by whitespace or end of text
_SENTENCE_BREAK = re.compile(r"[.!?](?=\s|$)")


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens, in order, duplicates kept.

    Splits on any character that is not a letter, digit, apostrophe or
    hyphen, then strips apostrophes and hyphens from token edges.
    Empty input gives an empty list.
    """
    tokens = []
    buf = []
    for ch in text.lower():
        if ch.isalnum() or ch in "'-":
            buf.append(ch)
        elif buf:
            tokens.append("".join(buf))
            buf.clear()
    if buf:
        tokens.append("".join(buf))
    return [stripped for t in tokens if (stripped := t.strip("'-"))]


def stem_tokens(tokens: list[str]) -> list[str]:
    """Elementwise Porter stem; length and order preserved."""
    return [porter_stem(t) for t in tokens]


def split_sentences(text: str) -> list[str]:
    """Split on sentence-final punctuation; drops the delimiters.

    No abbreviation handling: "Dr. Smith" splits after "Dr". Good
    enough for dictionary glosses, which is all this is used for.
    """
    parts = _SENTENCE_BREAK.split(text)
    return [s for part in parts if (s := part.strip())]
