#!/usr/bin/env python3
"""Run every analysis against a canonical dataset directory and collect the
figure/table data files in one place.

Play-by-play commands (pat, fourth-down) are skipped automatically when the
dataset carries only game-level stats.

Usage: python scripts/full_report.py <data_dir> <out_dir> [seed]
"""

import sys
from pathlib import Path

from gridiron.cli import dispatch


def main() -> int:
    if len(sys.argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    data = Path(sys.argv[1])
    out = Path(sys.argv[2])
    seed = sys.argv[3] if len(sys.argv) > 3 else "177001"

    code = dispatch(["validate", "--data", str(data)])
    if code != 0:
        return code

    has_plays = (data / "plays.csv").exists()
    steps = []
    if has_plays:
        steps += [["pat", "--data", str(data), "--out", str(out)],
                  ["fourth-down", "--data", str(data), "--out", str(out)]]
    steps += [
        ["rank", "--data", str(data), "--out", str(out)],
        ["fit", "--data", str(data), "--out", str(out)],
        ["cv", "--data", str(data), "--seed", seed],
        ["evaluate", "--data", str(data), "--out", str(out), "--seed", seed],
    ]
    for argv in steps:
        print(f"$ gridiron {' '.join(argv)}", file=sys.stderr)
        code = dispatch(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
