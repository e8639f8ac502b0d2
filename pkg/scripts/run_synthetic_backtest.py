#!/usr/bin/env python3
"""Generate a synthetic multi-season league, backtest the prediction engine
on it, and leave every report table in an output directory.

Usage: python scripts/run_synthetic_backtest.py [out_dir] [seed]
"""

import sys
from pathlib import Path

from gridiron.cli import dispatch


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("synthetic_run")
    seed = sys.argv[2] if len(sys.argv) > 2 else "424242"
    data_dir = out / "data"
    report_dir = out / "reports"

    steps = [
        ["synth", "--out", str(data_dir), "--seed", seed],
        ["validate", "--data", str(data_dir)],
        ["rank", "--data", str(data_dir), "--out", str(report_dir)],
        ["fit", "--data", str(data_dir), "--out", str(report_dir)],
        ["cv", "--data", str(data_dir), "--seed", seed],
        ["evaluate", "--data", str(data_dir), "--out", str(report_dir),
         "--bootstrap", "200", "--seed", seed],
    ]
    for argv in steps:
        print(f"$ gridiron {' '.join(argv)}", file=sys.stderr)
        code = dispatch(argv)
        if code != 0:
            return code
    print(f"reports in {report_dir}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
