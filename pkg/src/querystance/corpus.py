"""Dataset loading, grouping and splitting.

The on-disk format is a UTF-8 CSV (RFC-4180 quoting) with the header

    query_id,query_text,sentence_text,relevance,stance

An empty string in a label column means the label is absent. Label
strings are matched case-insensitively after trimming.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    BadLabel,
    ConflictingQueryText,
    EmptyText,
    MalformedCsv,
    MissingColumn,
    UnlabeledRecord,
)

EXPECTED_HEADER = ["query_id", "query_text", "sentence_text", "relevance", "stance"]

RELEVANCE_LABELS = ("relevant", "irrelevant")
STANCE_LABELS = ("support", "oppose", "neutral")


@dataclass(frozen=True)
class SentenceRecord:
    """One corpus row: a sentence paired with its query."""

    query_id: str
    query_text: str
    sentence_text: str
    relevance: str | None = None
    stance: str | None = None


@dataclass(frozen=True)
class QueryGroup:
    """A query plus its sentences, in file order."""

    query_id: str
    query_text: str
    records: tuple[SentenceRecord, ...]


@dataclass(frozen=True)
class DatasetSplit:
    train: list[SentenceRecord]
    dev: list[SentenceRecord]
    train_fraction: float


def _parse_label(raw: str, allowed: tuple[str, ...], row: int, column: str) -> str | None:
    value = raw.strip().lower()
    if not value:
        return None
    if value not in allowed:
        raise BadLabel(row, raw, f"{column} must be one of {allowed}")
    return value


def load_dataset(path: str | Path, labeled: bool = False) -> list[SentenceRecord]:
    """Read a dataset CSV into records, preserving file order.

    With ``labeled=True`` every row must carry a valid relevance label.
    Duplicate sentences are kept as distinct records.
    """
    records: list[SentenceRecord] = []
    with open(path, encoding="utf-8-sig", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn(f"{path}: empty file, expected header {','.join(EXPECTED_HEADER)}")
        if header != EXPECTED_HEADER:
            missing = [c for c in EXPECTED_HEADER if c not in header]
            detail = f"missing columns {missing}" if missing else f"unexpected header {header}"
            raise MissingColumn(f"{path}: {detail}")
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(EXPECTED_HEADER):
                raise MalformedCsv(row_no, f"expected {len(EXPECTED_HEADER)} fields, got {len(row)}")
            query_id, query_text, sentence_text, relevance_raw, stance_raw = row
            query_id = query_id.strip()
            query_text = query_text.strip()
            sentence_text = sentence_text.strip()
            if not query_text:
                raise EmptyText(row_no, "query_text")
            if not sentence_text:
                raise EmptyText(row_no, "sentence_text")
            relevance = _parse_label(relevance_raw, RELEVANCE_LABELS, row_no, "relevance")
            stance = _parse_label(stance_raw, STANCE_LABELS, row_no, "stance")
            if labeled and relevance is None:
                raise BadLabel(row_no, relevance_raw, "labeled dataset requires a relevance label")
            if stance is not None and relevance is None:
                raise BadLabel(row_no, stance_raw, "stance label present without a relevance label")
            records.append(
                SentenceRecord(
                    query_id=query_id,
                    query_text=query_text,
                    sentence_text=sentence_text,
                    relevance=relevance,
                    stance=stance,
                )
            )
    return records


def group_by_query(records: list[SentenceRecord]) -> list[QueryGroup]:
    """One group per distinct query_id, in order of first appearance."""
    order: list[str] = []
    by_id: dict[str, list[SentenceRecord]] = {}
    texts: dict[str, str] = {}
    for record in records:
        if record.query_id not in by_id:
            order.append(record.query_id)
            by_id[record.query_id] = []
            texts[record.query_id] = record.query_text
        elif texts[record.query_id] != record.query_text:
            raise ConflictingQueryText(
                f"query_id {record.query_id!r} maps to both "
                f"{texts[record.query_id]!r} and {record.query_text!r}"
            )
        by_id[record.query_id].append(record)
    return [
        QueryGroup(query_id=qid, query_text=texts[qid], records=tuple(by_id[qid]))
        for qid in order
    ]


def split_train_dev(
    records: list[SentenceRecord], train_fraction: float, seed: int
) -> DatasetSplit:
    """Seeded, per-query stratified split into train and dev.

    Each query group contributes round(train_fraction * group size)
    records to the train side. Deterministic for a fixed seed.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    for record in records:
        if record.relevance is None:
            raise UnlabeledRecord(
                f"record for query {record.query_id!r} has no relevance label"
            )
    rng = random.Random(seed)
    train: list[SentenceRecord] = []
    dev: list[SentenceRecord] = []
    for group in group_by_query(records):
        indices = list(range(len(group.records)))
        rng.shuffle(indices)
        n_train = round(train_fraction * len(group.records))
        chosen = set(indices[:n_train])
        for i, record in enumerate(group.records):
            (train if i in chosen else dev).append(record)
    return DatasetSplit(train=train, dev=dev, train_fraction=train_fraction)
