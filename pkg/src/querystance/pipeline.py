"""End-to-end orchestration: vocabularies, features, training, chaining.

Relevance (task 1) trains one pooled binary SVM over all queries, with
a TF-IDF vocabulary fitted per query group. Stance (task 2) trains a
one-vs-one SVM over a global vocabulary; its relevance-flag feature
uses gold labels at training time and task-1 predictions at inference
time, so the two stages chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import SentenceRecord, group_by_query, split_train_dev
from .errors import (
    AlignmentError,
    CorruptModel,
    EmptyInput,
    LengthMismatch,
    MissingStanceLabel,
    UnlabeledRecord,
    VersionMismatch,
)
from .features import (
    VocabularyModel,
    fit_vocabulary,
    task1_features,
    task2_features,
)
from .lexicons import (
    GlossDictionary,
    NounLexicon,
    SentimentLexicon,
    load_gloss_dictionary,
    load_noun_lexicon,
    load_sentiment_lexicon,
)
from .svm import (
    KernelConfig,
    MulticlassModel,
    SvmConfig,
    model_from_doc,
    model_to_doc,
    predict as svm_predict,
    train_multiclass,
)
from .textproc import tokenize

RELEVANT = "relevant"
IRRELEVANT = "irrelevant"
NEUTRAL = "neutral"

THREE_CLASS = "three_class"
TWO_CLASS = "two_class"

PIPELINE_FORMAT = "querystance-pipeline"
PIPELINE_FORMAT_VERSION = 1


def default_task1_svm() -> SvmConfig:
    return SvmConfig(c=1e7, kernel=KernelConfig("poly", gamma=0.006, degree=3, coef0=0.0))


def default_task2_svm() -> SvmConfig:
    return SvmConfig(c=1e7, kernel=KernelConfig("rbf", gamma=0.005))


@dataclass(frozen=True)
class PipelineConfig:
    """Run settings; the defaults are the tuned reference settings."""

    task1: SvmConfig = field(default_factory=default_task1_svm)
    task2: SvmConfig = field(default_factory=default_task2_svm)
    stance_classes: str = THREE_CLASS
    train_fraction: float = 0.6
    seed: int = 0
    gloss_path: str | None = None
    sentiment_path: str | None = None
    noun_path: str | None = None

    def __post_init__(self):
        if self.stance_classes not in (THREE_CLASS, TWO_CLASS):
            raise ValueError(f"stance_classes must be {THREE_CLASS!r} or {TWO_CLASS!r}")


@dataclass(frozen=True)
class LexiconSet:
    gloss: GlossDictionary
    sentiment: SentimentLexicon
    nouns: NounLexicon

    @classmethod
    def load(
        cls,
        gloss_path: str | Path | None = None,
        sentiment_path: str | Path | None = None,
        noun_path: str | Path | None = None,
    ) -> "LexiconSet":
        """Load whichever resources are given; the rest stay empty."""
        return cls(
            gloss=load_gloss_dictionary(gloss_path) if gloss_path else GlossDictionary(),
            sentiment=load_sentiment_lexicon(sentiment_path) if sentiment_path else SentimentLexicon(),
            nouns=load_noun_lexicon(noun_path) if noun_path else NounLexicon(),
        )


@dataclass
class TrainedPipeline:
    """Trained models plus the vocabularies and lexicons they rely on."""

    config: PipelineConfig
    lexicons: LexiconSet
    task1_model: MulticlassModel | None = None
    task1_vocabularies: dict[str, VocabularyModel] = field(default_factory=dict)
    task2_model: MulticlassModel | None = None
    task2_vocabulary: VocabularyModel | None = None


def _sentence_tokens(records: Iterable[SentenceRecord]) -> list[list[str]]:
    return [tokenize(r.sentence_text) for r in records]


def _fit_group_vocabularies(records: Sequence[SentenceRecord]) -> dict[str, VocabularyModel]:
    return {
        group.query_id: fit_vocabulary(_sentence_tokens(group.records))
        for group in group_by_query(records)
    }


def _task1_vectors(
    records: Sequence[SentenceRecord],
    vocabularies: dict[str, VocabularyModel],
    lexicons: LexiconSet,
):
    return [
        task1_features(
            r.query_text,
            r.sentence_text,
            vocabularies[r.query_id],
            lexicons.gloss,
            lexicons.nouns,
        )
        for r in records
    ]


def train_task1(
    records: Sequence[SentenceRecord],
    lexicons: LexiconSet,
    config: PipelineConfig,
) -> TrainedPipeline:
    """Fit per-query vocabularies and the pooled relevance classifier."""
    labels = []
    for r in records:
        if r.relevance is None:
            raise UnlabeledRecord(f"record for query {r.query_id!r} has no relevance label")
        labels.append(r.relevance)
    vocabularies = _fit_group_vocabularies(records)
    vectors = _task1_vectors(records, vocabularies, lexicons)
    model = train_multiclass(vectors, labels, config.task1, seed=config.seed)
    return TrainedPipeline(
        config=config,
        lexicons=lexicons,
        task1_model=model,
        task1_vocabularies=vocabularies,
    )


def predict_task1(pipeline: TrainedPipeline, records: Sequence[SentenceRecord]) -> list[str]:
    """Relevance label per record, in input order.

    Queries unseen at training time get a throwaway vocabulary fitted
    over their own sentences in this batch.
    """
    if pipeline.task1_model is None:
        raise ValueError("pipeline has no trained task-1 model")
    if not records:
        return []
    vocabularies = dict(pipeline.task1_vocabularies)
    for group in group_by_query(records):
        if group.query_id not in vocabularies:
            vocabularies[group.query_id] = fit_vocabulary(_sentence_tokens(group.records))
    vectors = _task1_vectors(records, vocabularies, pipeline.lexicons)
    return [svm_predict(pipeline.task1_model, v) for v in vectors]


def train_task2(
    records: Sequence[SentenceRecord],
    task1_labels: Sequence[str],
    lexicons: LexiconSet,
    config: PipelineConfig,
    pipeline: TrainedPipeline | None = None,
) -> TrainedPipeline:
    """Fit the global vocabulary and the stance classifier.

    ``task1_labels`` supplies each record's relevance flag (gold labels
    at training time). In two-class mode, neutral rows are excluded
    from SVM training but still contribute to the vocabulary.
    """
    if len(task1_labels) != len(records):
        raise AlignmentError(
            f"{len(records)} records but {len(task1_labels)} relevance labels"
        )
    for r in records:
        if r.stance is None:
            raise MissingStanceLabel(f"record for query {r.query_id!r} has no stance label")
    vocabulary = fit_vocabulary(_sentence_tokens(records))
    vectors = [
        task2_features(r.sentence_text, label == RELEVANT, vocabulary, lexicons.sentiment)
        for r, label in zip(records, task1_labels)
    ]
    stances = [r.stance for r in records]
    if config.stance_classes == TWO_CLASS:
        kept = [i for i, s in enumerate(stances) if s != NEUTRAL]
        vectors = [vectors[i] for i in kept]
        stances = [stances[i] for i in kept]
    model = train_multiclass(vectors, stances, config.task2, seed=config.seed)
    if pipeline is None:
        pipeline = TrainedPipeline(config=config, lexicons=lexicons)
    pipeline.task2_model = model
    pipeline.task2_vocabulary = vocabulary
    return pipeline


def predict_task2(
    pipeline: TrainedPipeline,
    records: Sequence[SentenceRecord],
    task1_predictions: Sequence[str],
) -> list[str]:
    """Stance label per record, chained on task-1 output.

    In two-class mode, records predicted irrelevant come back neutral
    without consulting the model.
    """
    if pipeline.task2_model is None:
        raise ValueError("pipeline has no trained task-2 model")
    if len(task1_predictions) != len(records):
        raise AlignmentError(
            f"{len(records)} records but {len(task1_predictions)} task-1 predictions"
        )
    two_class = pipeline.config.stance_classes == TWO_CLASS
    out = []
    for record, relevance in zip(records, task1_predictions):
        if two_class and relevance != RELEVANT:
            out.append(NEUTRAL)
            continue
        vector = task2_features(
            record.sentence_text,
            relevance == RELEVANT,
            pipeline.task2_vocabulary,
            pipeline.lexicons.sentiment,
        )
        out.append(svm_predict(pipeline.task2_model, vector))
    return out


# --- evaluation -------------------------------------------------------------


@dataclass(frozen=True)
class QueryAccuracy:
    query_id: str
    correct: int
    total: int

    @property
    def accuracy(self) -> float:
        return 100.0 * self.correct / self.total


@dataclass(frozen=True)
class EvaluationReport:
    """Per-query accuracy rows plus their unweighted mean."""

    rows: tuple[QueryAccuracy, ...]

    @property
    def macro_average(self) -> float:
        return macro_average(row.accuracy for row in self.rows)

    def render_table(self) -> str:
        width = max(len("query_id"), *(len(r.query_id) for r in self.rows))
        lines = [f"{'query_id':<{width}}  accuracy"]
        for row in self.rows:
            lines.append(f"{row.query_id:<{width}}  {row.accuracy:.8f}")
        lines.append(f"{'MACRO_AVERAGE':<{width}}  {self.macro_average:.8f}")
        return "\n".join(lines)

    def to_csv_rows(self) -> list[tuple[str, str]]:
        rows = [(r.query_id, repr(r.accuracy)) for r in self.rows]
        rows.append(("MACRO_AVERAGE", repr(self.macro_average)))
        return rows


def macro_average(accuracies: Iterable[float]) -> float:
    """Unweighted mean over queries."""
    values = list(accuracies)
    if not values:
        raise EmptyInput("macro average of zero queries")
    return sum(values) / len(values)


def evaluate(
    gold: Sequence[str],
    predicted: Sequence[str],
    query_ids: Sequence[str],
) -> EvaluationReport:
    """Percentage accuracy per query, queries in first-appearance order."""
    if len(gold) != len(predicted):
        raise LengthMismatch(f"{len(gold)} gold labels vs {len(predicted)} predictions")
    if len(gold) != len(query_ids):
        raise LengthMismatch(f"{len(gold)} gold labels vs {len(query_ids)} query ids")
    if not gold:
        raise EmptyInput("nothing to evaluate")
    order: list[str] = []
    correct: dict[str, int] = {}
    total: dict[str, int] = {}
    for qid, g, p in zip(query_ids, gold, predicted):
        if qid not in total:
            order.append(qid)
            total[qid] = 0
            correct[qid] = 0
        total[qid] += 1
        if g == p:
            correct[qid] += 1
    return EvaluationReport(
        rows=tuple(QueryAccuracy(qid, correct[qid], total[qid]) for qid in order)
    )


# --- tuning -----------------------------------------------------------------


def grid_search(
    records: Sequence[SentenceRecord],
    grid: Sequence[SvmConfig],
    lexicons: LexiconSet,
    config: PipelineConfig,
    task: int = 1,
) -> tuple[SvmConfig, float]:
    """Score each candidate on a seeded train/dev split; first best wins.

    Task 1 scores relevance accuracy; task 2 scores stance accuracy
    with gold relevance flags on both sides of the split.
    """
    if not grid:
        raise ValueError("empty parameter grid")
    if task not in (1, 2):
        raise ValueError(f"task must be 1 or 2, got {task}")
    split = split_train_dev(list(records), config.train_fraction, config.seed)
    best: tuple[SvmConfig, float] | None = None
    for candidate in grid:
        if task == 1:
            cfg = replace(config, task1=candidate)
            trained = train_task1(split.train, lexicons, cfg)
            predictions = predict_task1(trained, split.dev)
            gold = [r.relevance for r in split.dev]
        else:
            cfg = replace(config, task2=candidate)
            trained = train_task2(
                split.train, [r.relevance for r in split.train], lexicons, cfg
            )
            predictions = predict_task2(
                trained, split.dev, [r.relevance for r in split.dev]
            )
            gold = [r.stance for r in split.dev]
        accuracy = sum(g == p for g, p in zip(gold, predictions)) / len(gold)
        if best is None or accuracy > best[1]:
            best = (candidate, accuracy)
    return best


# --- persistence ------------------------------------------------------------


def _svm_config_to_doc(cfg: SvmConfig) -> dict:
    return {
        "c": cfg.c,
        "kernel": {
            "kind": cfg.kernel.kind,
            "gamma": cfg.kernel.gamma,
            "degree": cfg.kernel.degree,
            "coef0": cfg.kernel.coef0,
        },
        "tol": cfg.tol,
        "max_passes": cfg.max_passes,
        "eps": cfg.eps,
    }


def _svm_config_from_doc(doc: dict) -> SvmConfig:
    return SvmConfig(
        c=float(doc["c"]),
        kernel=KernelConfig(
            kind=doc["kernel"]["kind"],
            gamma=float(doc["kernel"]["gamma"]),
            degree=int(doc["kernel"]["degree"]),
            coef0=float(doc["kernel"]["coef0"]),
        ),
        tol=float(doc["tol"]),
        max_passes=int(doc["max_passes"]),
        eps=float(doc["eps"]),
    )


def _config_to_doc(config: PipelineConfig) -> dict:
    return {
        "task1": _svm_config_to_doc(config.task1),
        "task2": _svm_config_to_doc(config.task2),
        "stance_classes": config.stance_classes,
        "train_fraction": config.train_fraction,
        "seed": config.seed,
        "gloss_path": config.gloss_path,
        "sentiment_path": config.sentiment_path,
        "noun_path": config.noun_path,
    }


def _config_from_doc(doc: dict) -> PipelineConfig:
    return PipelineConfig(
        task1=_svm_config_from_doc(doc["task1"]),
        task2=_svm_config_from_doc(doc["task2"]),
        stance_classes=doc["stance_classes"],
        train_fraction=float(doc["train_fraction"]),
        seed=int(doc["seed"]),
        gloss_path=doc.get("gloss_path"),
        sentiment_path=doc.get("sentiment_path"),
        noun_path=doc.get("noun_path"),
    )


def save_task_model(pipeline: TrainedPipeline, task: int, path: str | Path) -> None:
    """Write one task's model, vocabularies and config snapshot as JSON."""
    if task == 1:
        if pipeline.task1_model is None:
            raise ValueError("pipeline has no trained task-1 model")
        payload = {
            "svm": model_to_doc(pipeline.task1_model),
            "vocabularies": {
                qid: vocab.to_dict() for qid, vocab in pipeline.task1_vocabularies.items()
            },
        }
    elif task == 2:
        if pipeline.task2_model is None:
            raise ValueError("pipeline has no trained task-2 model")
        payload = {
            "svm": model_to_doc(pipeline.task2_model),
            "vocabulary": pipeline.task2_vocabulary.to_dict(),
        }
    else:
        raise ValueError(f"task must be 1 or 2, got {task}")
    doc = {
        "format": PIPELINE_FORMAT,
        "format_version": PIPELINE_FORMAT_VERSION,
        "task": task,
        "config": _config_to_doc(pipeline.config),
        **payload,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, sort_keys=True, indent=1)
        handle.write("\n")


def load_task_model(
    path: str | Path,
    lexicons: LexiconSet,
    into: TrainedPipeline | None = None,
) -> TrainedPipeline:
    """Load a saved task model, optionally merging into an existing pipeline.

    Merging a task-2 file also adopts its stance_classes setting so a
    chained pipeline behaves as the task-2 model was trained.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise CorruptModel(f"{path}: invalid JSON: {exc}") from exc
    try:
        if doc.get("format") != PIPELINE_FORMAT:
            raise CorruptModel(f"{path}: not a {PIPELINE_FORMAT} document")
        if doc["format_version"] != PIPELINE_FORMAT_VERSION:
            raise VersionMismatch(
                f"{path}: unsupported format_version {doc['format_version']!r}"
            )
        task = doc["task"]
        config = _config_from_doc(doc["config"])
        model = model_from_doc(doc["svm"])
        if into is None:
            into = TrainedPipeline(config=config, lexicons=lexicons)
        if task == 1:
            into.task1_model = model
            into.task1_vocabularies = {
                qid: VocabularyModel.from_dict(v) for qid, v in doc["vocabularies"].items()
            }
        elif task == 2:
            into.task2_model = model
            into.task2_vocabulary = VocabularyModel.from_dict(doc["vocabulary"])
            if into.config.stance_classes != config.stance_classes:
                into.config = replace(into.config, stance_classes=config.stance_classes)
        else:
            raise CorruptModel(f"{path}: unknown task {task!r}")
        return into
    except (VersionMismatch, CorruptModel):
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"{path}: malformed pipeline document: {exc}") from exc
