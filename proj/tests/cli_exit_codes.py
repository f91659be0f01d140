#!/usr/bin/env python3
"""Exit-code contract of the tseg CLI: 0 success, 1 validation, 2 I/O."""

import json
import os
import subprocess
import sys
import tempfile

TSEG = sys.argv[1]


def run(*args):
    return subprocess.run([TSEG, *args], capture_output=True, text=True)


def expect(code, *args):
    r = run(*args)
    if r.returncode != code:
        print(f"FAIL: tseg {' '.join(args)} -> {r.returncode}, expected {code}\n{r.stdout}{r.stderr}")
        sys.exit(1)
    print(f"ok   exit {code}: tseg {' '.join(args)}")
    return r


with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "out")
    expect(0, "synth", "--out", out, "--documents", "30", "--groups", "3")
    corpus = os.path.join(out, "corpus.jsonl")
    expect(0, "eval", "--corpus", corpus, "--out", os.path.join(tmp, "eval"))
    expect(0, "pairs", "--corpus", corpus, "--out", os.path.join(tmp, "pairs"))
    expect(0, "train", "--corpus", corpus, "--out", os.path.join(tmp, "train"))
    model = os.path.join(tmp, "train", "model.json")
    expect(0, "score", "--corpus", corpus, "--model", model, "--all", "--out", os.path.join(tmp, "score"))
    probs = os.path.join(tmp, "score", "probs.jsonl")
    expect(0, "tune", "--corpus", corpus, "--probs", probs, "--out", os.path.join(tmp, "tune"))
    expect(0, "segment", "--corpus", corpus, "--probs", probs, "--all", "--out", os.path.join(tmp, "seg"))
    expect(0, "analyze", "--corpus", corpus, "--probs", probs, "--out", os.path.join(tmp, "an"))
    expect(0, "cv", "--corpus", corpus, "--out", os.path.join(tmp, "cv"))
    ingest_in = os.path.join(tmp, "raw.jsonl")
    with open(ingest_in, "w") as fh:
        fh.write(json.dumps({"doc_id": "r", "segments": ["A one. A two.", "B three."]}) + "\n")
    expect(0, "ingest", "--input", ingest_in, "--out", os.path.join(tmp, "ing"))

    bad = os.path.join(tmp, "bad.jsonl")
    with open(bad, "w") as fh:
        fh.write('{"doc_id":"x","sentences":["a","b"],"boundaries":[7]}\n')
    expect(1, "eval", "--corpus", bad)
    cfg = os.path.join(tmp, "cfg.json")
    with open(cfg, "w") as fh:
        fh.write('{"loss": {"gamma": -1}}')
    expect(1, "eval", "--config", cfg, "--corpus", corpus)
    expect(1, "eval", "--no-such-flag")
    expect(1, "cv", "--corpus", bad)

    expect(2, "eval", "--corpus", os.path.join(tmp, "missing.jsonl"))
    expect(2, "eval", "--config", os.path.join(tmp, "missing.json"))
    expect(2, "score", "--corpus", corpus, "--model", os.path.join(tmp, "missing_model.json"))
print("cli exit codes ok")
