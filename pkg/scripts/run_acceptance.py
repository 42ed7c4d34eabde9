#!/usr/bin/env python3
"""
Script de lancement de la campagne d'acceptation pinvtool.

Runs the full-scale verification sweeps (columns and rows, both backends),
the property suites and the performance smoke test, then prints a verdict.
"""

from __future__ import annotations

import sys
from pathlib import Path

root_dir = Path(__file__).parent.parent
sys.path.insert(0, str(root_dir / "src"))

from harness.cli import main as pinvtool  # noqa: E402

REPORTS = root_dir / "reports"

CAMPAIGN = [
    ("columns, invchol", ["verify", "--pattern", "mixed", "--m", "30", "--n", "30", "--p", "12", "--vary-shapes",
                          "--count", "1000", "--seed", "42", "--theorems", "500", "--report", str(REPORTS / "columns.json")]),
    ("columns, chol", ["verify", "--pattern", "mixed", "--m", "30", "--n", "30", "--p", "12", "--vary-shapes",
                       "--count", "500", "--seed", "43", "--backend", "chol", "--report", str(REPORTS / "columns_chol.json")]),
    ("rows, invchol", ["verify", "--pattern", "mixed", "--m", "30", "--n", "30", "--q", "12", "--rows", "--vary-shapes",
                       "--count", "500", "--seed", "44", "--report", str(REPORTS / "rows.json")]),
    ("bench", ["bench", "--m", "200", "--n", "100", "--p", "16", "--seed", "1", "--reps", "20",
               "--csv", str(REPORTS / "bench.csv")]),
]


def main() -> int:
    """Run every step; the exit code is the worst step exit code."""
    worst = 0
    for label, argv in CAMPAIGN:
        print(f"🔄 {label}")
        code = pinvtool(argv)
        print(f"{'✅' if code == 0 else '❌'} {label}: exit {code}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
