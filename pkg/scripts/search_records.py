#!/usr/bin/env python3
"""Run a record search through the CLI and optionally save the b-file.

Thin wrapper over `ceildyn records` so long searches get the cache and the
worker pool for free.
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stdout

from ceildyn.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", choices=("theta_d3", "theta_succ", "theta_mult"), required=True)
    parser.add_argument("--bound", type=int, required=True)
    parser.add_argument("--window", type=int, default=None)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--cache", default=None)
    parser.add_argument("--out", default=None, help="write the b-file here as well")
    args = parser.parse_args()

    argv = ["records", "--kind", args.kind, "--bound", str(args.bound), "--format", "bfile"]
    if args.window is not None:
        argv += ["--window", str(args.window)]
    if args.workers != 1:
        argv += ["--workers", str(args.workers)]
    if args.cache is not None:
        argv += ["--cache", args.cache]

    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = cli_main(argv)
    text = buffer.getvalue()
    sys.stdout.write(text)
    if code == 0 and args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
