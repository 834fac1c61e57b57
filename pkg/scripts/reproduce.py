#!/usr/bin/env python3
"""Regenerate the shipped synthetic collection (seed 42) and run the full
four-configuration experiment into ./runs/.

Equivalent to:
    polyrec synth --out data/synth42 --seed 42
    polyrec experiment --corpus data/synth42/corpus.jsonl \
        --topics data/synth42/topics.tsv --qrels data/synth42/qrels.txt \
        --out runs
"""

import sys
from pathlib import Path

from polyrec.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run() -> int:
    data_dir = ROOT / "data" / "synth42"
    runs_dir = ROOT / "runs"
    code = main(["synth", "--out", str(data_dir), "--seed", "42"])
    if code != 0:
        return code
    return main([
        "experiment",
        "--corpus", str(data_dir / "corpus.jsonl"),
        "--topics", str(data_dir / "topics.tsv"),
        "--qrels", str(data_dir / "qrels.txt"),
        "--out", str(runs_dir),
    ])


if __name__ == "__main__":
    sys.exit(run())
