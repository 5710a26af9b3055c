"""Command-line interface: train, predict, evaluate, features.

Every artifact-producing run writes a ``<out>.manifest.json`` next to
its output with input digests, the resolved settings and the seed, so
runs can be reproduced and verified. Exit codes: 0 success, 1 data or
model error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone

from . import __version__
from .corpus import EXPECTED_HEADER, group_by_query, load_dataset, split_train_dev
from .errors import AlignmentError, LengthMismatch, QueryStanceError
from .features import (
    SCHEMA_TASK1,
    SCHEMA_TASK2,
    TASK1_FEATURE_NAMES,
    fit_vocabulary,
    task1_features,
    task2_features,
)
from .pipeline import (
    LexiconSet,
    PipelineConfig,
    RELEVANT,
    TrainedPipeline,
    evaluate,
    load_task_model,
    predict_task1,
    predict_task2,
    save_task_model,
    train_task1,
    train_task2,
)
from .svm import KernelConfig, SvmConfig
from .textproc import tokenize

TASK_DEFAULT_KERNEL = {1: ("poly", 0.006), 2: ("rbf", 0.005)}


# --- settings resolution ----------------------------------------------------


def _parse_bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise QueryStanceError(f"expected a boolean, got {raw!r}")


def _read_config_file(path: str) -> dict[str, str]:
    """key=value lines; '#' comments and blank lines ignored."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise QueryStanceError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class Settings:
    """Layered option lookup: explicit flag, then config file, then default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_values = _read_config_file(args.config) if getattr(args, "config", None) else {}

    def get(self, name: str, default, convert=None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        if name in self.file_values:
            raw = self.file_values[name]
            return convert(raw) if convert else raw
        return default


def _svm_config(settings: Settings, task: int) -> SvmConfig:
    default_kind, default_gamma = TASK_DEFAULT_KERNEL[task]
    kernel = KernelConfig(
        kind=settings.get("kernel", default_kind),
        gamma=settings.get("gamma", default_gamma, float),
        degree=settings.get("degree", 3, int),
        coef0=settings.get("coef0", 0.0, float),
    )
    return SvmConfig(
        c=settings.get("C", 1e7, float),
        kernel=kernel,
        tol=settings.get("tol", 1e-3, float),
        max_passes=settings.get("max_passes", 1000, int),
        eps=settings.get("eps", 1e-8, float),
    )


def _pipeline_config(settings: Settings, task: int) -> PipelineConfig:
    config = PipelineConfig(
        stance_classes=settings.get("stance_classes", "three_class"),
        train_fraction=settings.get("train_fraction", 0.6, float),
        seed=settings.get("seed", 0, int),
        gloss_path=settings.get("gloss", None),
        sentiment_path=settings.get("sentiment", None),
        noun_path=settings.get("nouns", None),
    )
    return replace(config, **{f"task{task}": _svm_config(settings, task)})


def _load_lexicons(settings: Settings, task: int) -> LexiconSet:
    if task == 1:
        lexicons = LexiconSet.load(
            gloss_path=_require(settings, "gloss"),
            noun_path=_require(settings, "nouns"),
        )
        print(
            f"loaded {len(lexicons.gloss)} gloss entries, {len(lexicons.nouns)} nouns",
            file=sys.stderr,
        )
        return lexicons
    lexicons = LexiconSet.load(sentiment_path=_require(settings, "sentiment"))
    print(f"loaded {len(lexicons.sentiment)} sentiment entries", file=sys.stderr)
    return lexicons


def _require(settings: Settings, name: str) -> str:
    value = settings.get(name, None)
    if value is None:
        raise UsageError(f"--{name} is required for this command")
    return value


class UsageError(Exception):
    pass


# --- manifest ---------------------------------------------------------------


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(out_path: str, command: str, inputs: dict[str, str], config: dict, seed: int) -> None:
    manifest = {
        "command": command,
        "tool": "querystance",
        "version": __version__,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "seed": seed,
        "config": config,
        "inputs": {name: {"path": p, "sha256": _sha256(p)} for name, p in inputs.items()},
        "output": out_path,
    }
    with open(str(out_path) + ".manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, sort_keys=True, indent=1)
        handle.write("\n")


def _config_snapshot(config: PipelineConfig, task: int) -> dict:
    svm = getattr(config, f"task{task}")
    return {
        "task": task,
        "C": svm.c,
        "kernel": svm.kernel.kind,
        "gamma": svm.kernel.gamma,
        "degree": svm.kernel.degree,
        "coef0": svm.kernel.coef0,
        "tol": svm.tol,
        "max_passes": svm.max_passes,
        "eps": svm.eps,
        "stance_classes": config.stance_classes,
        "train_fraction": config.train_fraction,
        "seed": config.seed,
    }


# --- commands ---------------------------------------------------------------


def cmd_train(args: argparse.Namespace) -> int:
    settings = Settings(args)
    task = args.task
    data_path = _require(settings, "data")
    out_path = _require(settings, "out")
    config = _pipeline_config(settings, task)
    lexicons = _load_lexicons(settings, task)
    records = load_dataset(data_path, labeled=True)
    if not settings.get("retrain_full", True, _parse_bool):
        records = split_train_dev(records, config.train_fraction, config.seed).train
    if task == 1:
        pipeline = train_task1(records, lexicons, config)
    else:
        pipeline = train_task2(records, [r.relevance for r in records], lexicons, config)
    save_task_model(pipeline, task, out_path)
    inputs = {"data": data_path}
    for name in ("gloss", "nouns", "sentiment"):
        value = settings.get(name, None)
        if value:
            inputs[name] = value
    _write_manifest(out_path, "train", inputs, _config_snapshot(config, task), config.seed)
    print(f"wrote {out_path}")
    return 0


def _load_models(settings: Settings, lexicons: LexiconSet) -> tuple[TrainedPipeline, list[int]]:
    """Load --model (and --model2), returning the pipeline and task list."""
    model_path = _require(settings, "model")
    pipeline = load_task_model(model_path, lexicons)
    tasks = [1] if pipeline.task1_model is not None else [2]
    model2_path = settings.get("model2", None)
    if model2_path:
        pipeline = load_task_model(model2_path, lexicons, into=pipeline)
        tasks = [1, 2]
        if pipeline.task1_model is None or pipeline.task2_model is None:
            raise QueryStanceError(
                "--chain needs a task-1 model (--model) and a task-2 model (--model2)"
            )
    return pipeline, tasks


def cmd_predict(args: argparse.Namespace) -> int:
    settings = Settings(args)
    data_path = _require(settings, "data")
    out_path = _require(settings, "out")
    chain = bool(settings.get("chain", False, _parse_bool))
    lexicons = LexiconSet.load(
        gloss_path=settings.get("gloss", None),
        sentiment_path=settings.get("sentiment", None),
        noun_path=settings.get("nouns", None),
    )
    pipeline, tasks = _load_models(settings, lexicons)
    if chain and tasks != [1, 2]:
        raise QueryStanceError("--chain requires both --model and --model2")
    # lexicons absent now but used at training time degrade the features
    for flag, used_path, size in (
        ("nouns", pipeline.config.noun_path, len(lexicons.nouns)),
        ("gloss", pipeline.config.gloss_path, len(lexicons.gloss)),
        ("sentiment", pipeline.config.sentiment_path, len(lexicons.sentiment)),
    ):
        if used_path and size == 0:
            print(
                f"warning: model was trained with --{flag} but none was given",
                file=sys.stderr,
            )
    records = load_dataset(data_path, labeled=False)

    extra_columns: list[str] = []
    columns: dict[str, list[str]] = {}
    if 1 in tasks:
        relevance = predict_task1(pipeline, records)
        extra_columns.append("predicted_relevance")
        columns["predicted_relevance"] = relevance
        if 2 in tasks:
            stance = predict_task2(pipeline, records, relevance)
            extra_columns.append("predicted_stance")
            columns["predicted_stance"] = stance
    else:  # standalone task-2 model: relevance flags come from the dataset
        missing = [i for i, r in enumerate(records) if r.relevance is None]
        if missing:
            raise QueryStanceError(
                "standalone task-2 prediction needs a relevance column; "
                f"first unlabeled row: {missing[0] + 2}"
            )
        stance = predict_task2(pipeline, records, [r.relevance for r in records])
        extra_columns.append("predicted_stance")
        columns["predicted_stance"] = stance

    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(EXPECTED_HEADER + extra_columns)
        for i, record in enumerate(records):
            row = [
                record.query_id,
                record.query_text,
                record.sentence_text,
                record.relevance or "",
                record.stance or "",
            ]
            row.extend(columns[name][i] for name in extra_columns)
            writer.writerow(row)
    inputs = {"data": data_path, "model": settings.get("model", None)}
    model2_path = settings.get("model2", None)
    if model2_path:
        inputs["model2"] = model2_path
    _write_manifest(
        out_path,
        "predict",
        inputs,
        {"chain": chain, "tasks": tasks},
        pipeline.config.seed,
    )
    print(f"wrote {out_path} ({len(records)} rows)")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    settings = Settings(args)
    gold_path = _require(settings, "gold")
    pred_path = _require(settings, "pred")
    column = args.column
    gold_records = load_dataset(gold_path, labeled=False)
    gold = [getattr(r, column) for r in gold_records]
    for i, value in enumerate(gold):
        if value is None:
            raise QueryStanceError(f"{gold_path}: row {i + 2} has no {column} label")

    predicted_column = f"predicted_{column}"
    with open(pred_path, encoding="utf-8-sig", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or predicted_column not in reader.fieldnames:
            raise QueryStanceError(f"{pred_path}: missing column {predicted_column!r}")
        pred_rows = list(reader)
    if len(pred_rows) != len(gold_records):
        raise LengthMismatch(
            f"{len(gold_records)} gold rows vs {len(pred_rows)} prediction rows"
        )
    for i, (record, row) in enumerate(zip(gold_records, pred_rows)):
        if "query_id" in row and row["query_id"] != record.query_id:
            raise AlignmentError(
                f"row {i + 2}: gold query_id {record.query_id!r} "
                f"vs prediction query_id {row['query_id']!r}"
            )
    predictions = [row[predicted_column] for row in pred_rows]
    report = evaluate(gold, predictions, [r.query_id for r in gold_records])
    print(report.render_table())
    out_path = settings.get("out", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["query_id", "accuracy"])
            writer.writerows(report.to_csv_rows())
        _write_manifest(
            out_path,
            "evaluate",
            {"gold": gold_path, "pred": pred_path},
            {"column": column},
            0,
        )
    return 0


def cmd_features(args: argparse.Namespace) -> int:
    settings = Settings(args)
    task = args.task
    data_path = _require(settings, "data")
    out_path = _require(settings, "out")
    records = load_dataset(data_path, labeled=False)

    if task == 1:
        lexicons = _load_lexicons(settings, 1)
        vocabularies = {
            g.query_id: fit_vocabulary([tokenize(r.sentence_text) for r in g.records])
            for g in group_by_query(records)
        }
        header_comment = f"# schema_id={SCHEMA_TASK1}"
        names = list(TASK1_FEATURE_NAMES)
        vectors = [
            task1_features(
                r.query_text, r.sentence_text, vocabularies[r.query_id],
                lexicons.gloss, lexicons.nouns,
            )
            for r in records
        ]
    else:
        lexicons = _load_lexicons(settings, 2)
        model_path = _require(settings, "model")
        pipeline = load_task_model(model_path, lexicons)
        vocab = pipeline.task2_vocabulary
        if vocab is None:
            raise QueryStanceError(f"{model_path}: not a task-2 model file")
        for i, r in enumerate(records):
            if r.relevance is None:
                raise QueryStanceError(
                    f"{data_path}: row {i + 2} has no relevance label for the task-2 flag"
                )
        header_comment = f"# schema_id={SCHEMA_TASK2} n_vocab={vocab.size}"
        names = [f"tf:{term}" for term in vocab.terms]
        names += ["positive_count", "negative_count", "neutral_count", "relevance_flag"]
        vectors = [
            task2_features(r.sentence_text, r.relevance == RELEVANT, vocab, lexicons.sentiment)
            for r in records
        ]

    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(header_comment + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["query_id", "row"] + names)
        for i, (record, vector) in enumerate(zip(records, vectors)):
            writer.writerow([record.query_id, i] + [repr(v) for v in vector.values.tolist()])
    inputs = {"data": data_path}
    for name in ("gloss", "nouns", "sentiment", "model"):
        value = settings.get(name, None)
        if value:
            inputs[name] = value
    _write_manifest(out_path, "features", inputs, {"task": task}, settings.get("seed", 0, int))
    print(f"wrote {out_path} ({len(records)} rows)")
    return 0


# --- parser -----------------------------------------------------------------


def _add_common_paths(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", help="dataset CSV")
    parser.add_argument("--nouns", help="noun lexicon, one word per line")
    parser.add_argument("--gloss", help="gloss dictionary TSV (term<TAB>gloss)")
    parser.add_argument("--sentiment", help="sentiment lexicon TSV (term<TAB>pos<TAB>neg)")
    parser.add_argument("--out", help="output path")
    parser.add_argument("--config", help="key=value config file, overridden by explicit flags")
    parser.add_argument("--seed", type=int, help="RNG seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="querystance",
        description="Train, run and score the relevance/stance sentence classifiers.",
    )
    parser.add_argument("--version", action="version", version=f"querystance {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a task model from a labeled CSV")
    train.add_argument("--task", type=int, choices=(1, 2), required=True)
    _add_common_paths(train)
    train.add_argument("--C", type=float, dest="C", help="box constraint (default 1e7)")
    train.add_argument("--gamma", type=float, help="kernel gamma (default 0.006 poly / 0.005 rbf)")
    train.add_argument("--kernel", choices=("linear", "poly", "rbf"))
    train.add_argument("--degree", type=int, help="poly degree (default 3)")
    train.add_argument("--coef0", type=float, help="poly offset (default 0)")
    train.add_argument("--tol", type=float, help="KKT tolerance (default 1e-3)")
    train.add_argument("--max-passes", type=int, dest="max_passes")
    train.add_argument("--eps", type=float, help="alpha change floor (default 1e-8)")
    train.add_argument("--stance-classes", choices=("three_class", "two_class"), dest="stance_classes")
    train.add_argument("--train-fraction", type=float, dest="train_fraction")
    train.add_argument(
        "--no-retrain-full",
        dest="retrain_full",
        action="store_false",
        default=None,
        help="fit on the train side of the tuning split instead of all rows",
    )
    train.set_defaults(func=cmd_train)

    pred = sub.add_parser("predict", help="label a CSV with a trained model")
    _add_common_paths(pred)
    pred.add_argument("--model", help="model file")
    pred.add_argument("--model2", help="task-2 model file for --chain")
    pred.add_argument("--chain", action="store_true", default=None,
                      help="run task 1 then task 2")
    pred.set_defaults(func=cmd_predict)

    ev = sub.add_parser("evaluate", help="per-query accuracy of predictions vs gold")
    ev.add_argument("--gold", help="gold dataset CSV")
    ev.add_argument("--pred", help="predictions CSV from the predict command")
    ev.add_argument("--column", choices=("relevance", "stance"), default="relevance")
    ev.add_argument("--out", help="also write the report as CSV")
    ev.add_argument("--config", help="key=value config file")
    ev.set_defaults(func=cmd_evaluate)

    feats = sub.add_parser("features", help="dump feature vectors for inspection")
    feats.add_argument("--task", type=int, choices=(1, 2), required=True)
    _add_common_paths(feats)
    feats.add_argument("--model", help="task-2 model file supplying the vocabulary")
    feats.set_defaults(func=cmd_features)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (QueryStanceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # contract: never traceback to the shell
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
