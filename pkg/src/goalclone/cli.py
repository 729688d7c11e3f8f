"""Command-line entry point for the goal clone detector."""

from __future__ import annotations

import argparse
import sys

from .pipeline import RunOptions, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalclone",
        description=(
            "Detect pairs of alpha-equivalent proof goals in Rocq proof "
            "traces (*.trace.json files)."
        ),
    )
    parser.add_argument(
        "--traces", required=True, metavar="DIR",
        help="directory containing *.trace.json files",
    )
    parser.add_argument(
        "--min-proof-size", type=int, default=5, metavar="N",
        help="minimum tactic lines for both proofs of a reported pair (default: 5)",
    )
    parser.add_argument(
        "--format", choices=["json", "text"], default="text",
        help="report format (default: text)",
    )
    parser.add_argument(
        "--out", default=None, metavar="PATH",
        help="report output path (default: standard output)",
    )
    parser.add_argument(
        "--cache-dir", default=".clone-cache", metavar="DIR",
        help="per-trace result cache directory (default: .clone-cache)",
    )
    parser.add_argument(
        "--skip-same-theorem", action="store_true",
        help="do not report pairs within the same theorem",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = RunOptions(
        traces_dir=args.traces,
        min_proof_size=args.min_proof_size,
        format=args.format,
        out=args.out,
        cache_dir=args.cache_dir,
        skip_same_theorem=args.skip_same_theorem,
    )
    return run(opts).exit_code


if __name__ == "__main__":
    sys.exit(main())
