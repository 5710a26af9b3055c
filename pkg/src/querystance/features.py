"""Similarity features for query-sentence pairs.

Two feature schemas:

* ``task1-v1``: five similarity scores in [0, 1] used for relevance
  classification (exact, stemmed, noun, gloss-neighborhood, cosine).
* ``task2-v1``: a TF-IDF bag-of-words block over a fitted vocabulary
  plus positive/negative/neutral word counts and a relevance flag,
  used for stance classification.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyCorpus, VocabNotFitted
from .lexicons import (
    GlossDictionary,
    NounLexicon,
    Polarity,
    SentimentLexicon,
    gloss_first_k_sentences,
    is_noun,
    polarity,
)
from .textproc import stem_tokens, tokenize

SCHEMA_TASK1 = "task1-v1"
SCHEMA_TASK2 = "task2-v1"

TASK1_FEATURE_NAMES = ("exact", "stemmed", "noun", "neighborhood", "cosine")

GLOSS_SENTENCES = 3


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Dense feature values plus the schema they were computed under."""

    values: np.ndarray
    schema_id: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 1:
            raise ValueError("feature values must be a 1-D vector")

    @property
    def dims(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class VocabularyModel:
    """Sorted term list with per-term document frequencies.

    A "document" is one sentence; df(t) counts sentences containing t
    at least once. Term order is fixed at fit time and travels with
    serialized models.
    """

    terms: tuple[str, ...]
    df: tuple[int, ...]
    n_docs: int

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {term: i for i, term in enumerate(self.terms)}
        )

    @property
    def size(self) -> int:
        return len(self.terms)

    def index_of(self, term: str) -> int | None:
        return self._index.get(term)

    def to_dict(self) -> dict:
        return {"terms": list(self.terms), "df": list(self.df), "n_docs": self.n_docs}

    @classmethod
    def from_dict(cls, doc: dict) -> "VocabularyModel":
        return cls(terms=tuple(doc["terms"]), df=tuple(doc["df"]), n_docs=int(doc["n_docs"]))


def dice_similarity(query_tokens: Sequence[str], sentence_tokens: Sequence[str]) -> float:
    """2 * common / (len(query) + len(sentence)).

    ``common`` counts words word-by-word: a word appearing twice in both
    lists contributes two matches (multiset intersection).
    """
    if not query_tokens and not sentence_tokens:
        return 0.0
    q_counts = Counter(query_tokens)
    s_counts = Counter(sentence_tokens)
    common = sum(min(count, s_counts[word]) for word, count in q_counts.items())
    return 2.0 * common / (len(query_tokens) + len(sentence_tokens))


def feature_exact(query: str, sentence: str) -> float:
    return dice_similarity(tokenize(query), tokenize(sentence))


def feature_stemmed(query: str, sentence: str) -> float:
    return dice_similarity(stem_tokens(tokenize(query)), stem_tokens(tokenize(sentence)))


def feature_noun(query: str, sentence: str, noun_lex: NounLexicon) -> float:
    """Fraction of distinct query nouns that appear in the sentence."""
    query_nouns = {t for t in tokenize(query) if is_noun(noun_lex, t)}
    if not query_nouns:
        return 0.0
    sentence_words = set(tokenize(sentence))
    matched = query_nouns & sentence_words
    return len(matched) / len(query_nouns)


def feature_neighborhood(query: str, sentence: str, gloss_dict: GlossDictionary) -> float:
    """Exact matching widened by dictionary glosses.

    A sentence word also matches a query word when the first
    GLOSS_SENTENCES sentences of its gloss mention that query word.
    Matches per distinct query word are capped at that word's count in
    the query, and the final score is clamped to [0, 1] (one sentence
    word may match several query words through its gloss).
    """
    query_tokens = tokenize(query)
    sentence_tokens = tokenize(sentence)
    if not query_tokens and not sentence_tokens:
        return 0.0
    gloss_words = {
        word: set(gloss_first_k_sentences(gloss_dict, word, GLOSS_SENTENCES))
        for word in set(sentence_tokens)
    }
    common = 0
    for word, q_count in Counter(query_tokens).items():
        matched = sum(
            1 for s_word in sentence_tokens if s_word == word or word in gloss_words[s_word]
        )
        common += min(matched, q_count)
    score = 2.0 * common / (len(query_tokens) + len(sentence_tokens))
    return min(max(score, 0.0), 1.0)


def fit_vocabulary(sentences: Sequence[Sequence[str]]) -> VocabularyModel:
    """Collect sorted distinct terms and sentence-level frequencies."""
    if not sentences:
        raise EmptyCorpus("cannot fit a vocabulary on zero sentences")
    df_counts: Counter[str] = Counter()
    for tokens in sentences:
        df_counts.update(set(tokens))
    terms = tuple(sorted(df_counts))
    return VocabularyModel(
        terms=terms,
        df=tuple(df_counts[t] for t in terms),
        n_docs=len(sentences),
    )


def tfidf_vector(vocab: VocabularyModel, tokens: Sequence[str]) -> dict[int, float]:
    """Sparse TF-IDF weights keyed by term index.

    TF is count/len(tokens) with the denominator including
    out-of-vocabulary tokens; IDF is ln(n_docs/df). Terms absent from
    the vocabulary get no component. Absent key means weight 0.
    """
    if vocab is None:
        raise VocabNotFitted("tfidf_vector requires a fitted vocabulary")
    if not tokens:
        return {}
    total = len(tokens)
    weights: dict[int, float] = {}
    for term, count in Counter(tokens).items():
        idx = vocab.index_of(term)
        if idx is None:
            continue
        weights[idx] = (count / total) * math.log(vocab.n_docs / vocab.df[idx])
    return weights


def _cosine(u: dict[int, float], v: dict[int, float]) -> float:
    norm_u = math.sqrt(sum(w * w for w in u.values()))
    norm_v = math.sqrt(sum(w * w for w in v.values()))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    dot = sum(w * v[i] for i, w in u.items() if i in v)
    return dot / (norm_u * norm_v)


def feature_cosine(query: str, sentence: str, vocab: VocabularyModel) -> float:
    return _cosine(
        tfidf_vector(vocab, tokenize(query)),
        tfidf_vector(vocab, tokenize(sentence)),
    )


def task1_features(
    query: str,
    sentence: str,
    vocab: VocabularyModel,
    gloss_dict: GlossDictionary,
    noun_lex: NounLexicon,
) -> FeatureVector:
    """The five relevance features, ordered as TASK1_FEATURE_NAMES."""
    values = np.array(
        [
            feature_exact(query, sentence),
            feature_stemmed(query, sentence),
            feature_noun(query, sentence, noun_lex),
            feature_neighborhood(query, sentence, gloss_dict),
            feature_cosine(query, sentence, vocab),
        ],
        dtype=np.float64,
    )
    return FeatureVector(values=values, schema_id=SCHEMA_TASK1)


def task2_features(
    sentence: str,
    relevance_flag: bool,
    vocab_global: VocabularyModel,
    sent_lex: SentimentLexicon,
) -> FeatureVector:
    """TF-IDF block plus sentiment counts and the relevance flag.

    Dimension is vocabulary size + 4; the three counts partition the
    sentence's tokens.
    """
    if vocab_global is None:
        raise VocabNotFitted("task2_features requires a fitted global vocabulary")
    tokens = tokenize(sentence)
    block = np.zeros(vocab_global.size + 4, dtype=np.float64)
    for idx, weight in tfidf_vector(vocab_global, tokens).items():
        block[idx] = weight
    counts = Counter(polarity(sent_lex, t) for t in tokens)
    block[-4] = counts[Polarity.POSITIVE]
    block[-3] = counts[Polarity.NEGATIVE]
    block[-2] = counts[Polarity.NEUTRAL]
    block[-1] = 1.0 if relevance_flag else 0.0
    return FeatureVector(values=block, schema_id=SCHEMA_TASK2)
