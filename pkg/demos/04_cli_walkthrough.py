#!/usr/bin/env python3
"""Drive the command-line interface end to end in a scratch directory.

Writes a dataset and lexicons, trains both task models, runs a chained
prediction, and scores it. The same commands work from a shell; this
script just keeps the session reproducible.

Run:  python demos/04_cli_walkthrough.py
"""

import csv
import json
import random
import tempfile
from pathlib import Path

from querystance.cli import main

root = Path(tempfile.mkdtemp(prefix="querystance-demo-"))
print(f"working in {root}\n")

# --- a tiny labeled corpus in the dataset CSV format
POSITIVE = ("beneficial", "safe", "effective")
NEGATIVE = ("harmful", "risky", "damaging")
QUERIES = [
    ("q_juice", "is juice healthier than soda", ("juice", "soda")),
    ("q_desk", "are standing desks better for posture", ("desks", "posture")),
]
rng = random.Random(0)
rows = []
for query_id, query_text, nouns in QUERIES:
    for i in range(24):
        if i % 3 == 2:
            text = " ".join(rng.choice(("tractor", "violin", "chess", "marble")) for _ in range(5))
            relevance, stance = "irrelevant", "neutral"
        else:
            stance = "support" if i % 2 == 0 else "oppose"
            opinion = rng.choice(POSITIVE if stance == "support" else NEGATIVE)
            text = f"reports say {nouns[0]} and {nouns[1]} is {opinion}"
            relevance = "relevant"
        rows.append([query_id, query_text, text, relevance, stance])

train_csv = root / "train.csv"
with open(train_csv, "w", newline="", encoding="utf-8") as handle:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["query_id", "query_text", "sentence_text", "relevance", "stance"])
    writer.writerows(rows)

# unlabeled copy to stand in for test data
test_csv = root / "test.csv"
with open(test_csv, "w", newline="", encoding="utf-8") as handle:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["query_id", "query_text", "sentence_text", "relevance", "stance"])
    writer.writerows([[r[0], r[1], r[2], "", ""] for r in rows])

# --- lexicon files
(root / "nouns.txt").write_text(
    "\n".join(sorted({n for _, _, ns in QUERIES for n in ns})) + "\n", encoding="utf-8"
)
(root / "gloss.tsv").write_text(
    "cola\tCola is a sweetened soda. It is sold worldwide.\n", encoding="utf-8"
)
with open(root / "sentiment.tsv", "w", encoding="utf-8") as handle:
    for w in POSITIVE:
        handle.write(f"{w}\t0.8\t0.0\n")
    for w in NEGATIVE:
        handle.write(f"{w}\t0.0\t0.8\n")

lex = ["--nouns", str(root / "nouns.txt"), "--gloss", str(root / "gloss.tsv"),
       "--sentiment", str(root / "sentiment.tsv")]


def run(argv):
    print("$ querystance " + " ".join(argv))
    code = main(argv)
    print(f"(exit {code})\n")
    assert code == 0


# train both stages with the reference settings (explicit for clarity)
run(["train", "--task", "1", "--data", str(train_csv), "--out", str(root / "m1.json"),
     "--C", "1e7", "--gamma", "0.006", "--kernel", "poly", *lex])
run(["train", "--task", "2", "--data", str(train_csv), "--out", str(root / "m2.json"),
     "--C", "1e7", "--gamma", "0.005", "--kernel", "rbf", *lex])

# chained prediction: task 1 feeds task 2's relevance flag
run(["predict", "--chain", "--model", str(root / "m1.json"), "--model2", str(root / "m2.json"),
     "--data", str(test_csv), "--out", str(root / "pred.csv"), *lex])

# score both columns against the gold labels
run(["evaluate", "--gold", str(train_csv), "--pred", str(root / "pred.csv"),
     "--column", "relevance", "--out", str(root / "report_relevance.csv")])
run(["evaluate", "--gold", str(train_csv), "--pred", str(root / "pred.csv"),
     "--column", "stance"])

# dump the stage-1 feature vectors for inspection
run(["features", "--task", "1", "--data", str(train_csv),
     "--out", str(root / "features1.csv"), *lex])

manifest = json.loads((root / "pred.csv.manifest.json").read_text())
print("prediction manifest records its inputs:")
for name, entry in manifest["inputs"].items():
    print(f"  {name}: sha256 {entry['sha256'][:16]}...")
print(f"\nartifacts left in {root}")
