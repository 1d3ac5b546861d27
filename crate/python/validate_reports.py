"""Run each strongblock subcommand and validate its JSON report against
docs/report-schema.json. Needs a built CLI (cargo build --release) and the
jsonschema package."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

ROOT = Path(__file__).resolve().parent.parent
BIN = ROOT / "target" / "release" / "strongblock"
FIXTURES = ROOT / "crates" / "core" / "tests" / "fixtures"


def main():
    schema = json.loads((ROOT / "docs" / "report-schema.json").read_text())
    out = Path(tempfile.mkdtemp())
    runs = [
        ["verify", str(FIXTURES / "hyperbolic_quadric_pg32.txt")],
        ["verify", "--total", str(FIXTURES / "plane_pg32.txt")],
        ["code-check", str(FIXTURES / "quadric_code.txt")],
        ["code-check", str(FIXTURES / "counterexample_code.txt")],
        ["classify", "--k", "4", "--size", "9", "--golden"],
        ["search", "--k", "4", "--size", "9", "--emit", str(out / "found.txt")],
        ["search", "--k", "6", "--size", "15", "--mode", "line-union", "--budget", "2000", "--seed", "1"],
        ["quadric", "--k", "5", "--out", str(out / "q42.txt")],
    ]
    for args in runs:
        proc = subprocess.run([str(BIN), *args], capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            sys.exit(f"{args}: exit {proc.returncode}: {proc.stderr}")
        jsonschema.validate(json.loads(proc.stdout), schema)
        print("valid:", " ".join(args[:1] + [a for a in args[1:] if a.startswith("--")]))
    print("all reports match the schema")


if __name__ == "__main__":
    main()
