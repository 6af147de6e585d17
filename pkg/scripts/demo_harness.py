#!/usr/bin/env python3
"""End-to-end harness demo against the bundled stub parsers and fixture corpus.

Builds a run configuration on the fly, executes the three stubs over the
fourteen fixture files at parallelism 8, then analyzes the resulting relation.
Everything lands in a scratch directory printed at the end.
"""

import json
import sys
import tempfile
from pathlib import Path

from tdt.cli import main as tdt_main

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

PATTERNS = {
    "A": "00111000101110",
    "B": "00001011010101",
    "C": "11010000110110",
}


def main() -> int:
    stub = DATA / "stubs" / "pattern_parser.py"
    scratch = Path(tempfile.mkdtemp(prefix="tdt-demo-"))
    config = {
        "parsers": [
            {
                "name": name,
                "command": f"{sys.executable} {stub} {pattern} {{input}}",
                "policy": "stderr-empty",
                "keywords": ["parse error"],
            }
            for name, pattern in PATTERNS.items()
        ],
        "corpus": str(DATA / "corpus14"),
        "glob": "f*",
        "timeout_secs": 20,
        "parallelism": 8,
    }
    cfg_path = scratch / "run.json"
    cfg_path.write_text(json.dumps(config, indent=2))

    rel = scratch / "relation.json"
    steps = [
        ["run", "--config", str(cfg_path), "--out", str(rel),
         "--results", str(scratch / "results.jsonl"),
         "--keywords-out", str(scratch / "keywords.csv")],
        ["analyze", str(rel), "--weights", str(scratch / "weights.json"),
         "--dot", str(scratch / "graph.dot"),
         "--inconsistent", str(scratch / "inconsistent.json")],
        ["distill", str(rel), "--trace", str(scratch / "trace.json"),
         "--out", str(scratch / "distilled.json")],
        ["score", str(rel), "--scores", str(scratch / "scores.csv"),
         "--hist", str(scratch / "hist.csv")],
    ]
    for argv in steps:
        print(f"$ tdt {' '.join(argv)}")
        code = tdt_main(argv)
        if code != 0:
            return code
        print()
    print(f"artifacts in {scratch}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
