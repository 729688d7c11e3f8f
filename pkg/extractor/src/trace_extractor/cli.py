"""Command-line entry point for the trace extractor."""

from __future__ import annotations

import argparse
import sys

from .extract import ExtractResult, ProjectConfig, extract_project


def _mapping(kind: str):
    def parse(value: str) -> tuple[str, str, str]:
        physical, sep, logical = value.partition(",")
        if not sep or not physical or not logical:
            raise argparse.ArgumentTypeError(
                f"expected PHYSICAL,LOGICAL, got {value!r}"
            )
        return physical, logical, kind

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalclone-extract",
        description=(
            "Step through a Coq project with coq-lsp and write one "
            "*.trace.json file per theorem."
        ),
    )
    parser.add_argument(
        "--project", required=True, metavar="ROOT",
        help="Coq project root directory",
    )
    parser.add_argument(
        "-R", action="append", default=[], type=_mapping("R"),
        metavar="PHYS,LOGICAL", dest="mappings_r",
        help="recursive physical-to-logical path mapping (repeatable)",
    )
    parser.add_argument(
        "-Q", action="append", default=[], type=_mapping("Q"),
        metavar="PHYS,LOGICAL", dest="mappings_q",
        help="non-recursive physical-to-logical path mapping (repeatable)",
    )
    parser.add_argument(
        "--out", required=True, metavar="DIR",
        help="directory for emitted trace files",
    )
    parser.add_argument(
        "--server", default="coq-lsp", metavar="CMD",
        help="language server executable (default: coq-lsp)",
    )
    parser.add_argument(
        "--timeout", type=float, default=60.0, metavar="SECONDS",
        help="per-sentence goal query timeout (default: 60)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ProjectConfig(
            root=args.project,
            path_mappings=tuple(args.mappings_r) + tuple(args.mappings_q),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result: ExtractResult = extract_project(
        config, args.out, server_cmd=(args.server,), sentence_timeout=args.timeout
    )
    for diag in result.diagnostics:
        print(f"warning: {diag}", file=sys.stderr)
    print(
        f"{result.traces_written} trace(s) from {result.files_processed}/"
        f"{result.files_total} file(s)",
        file=sys.stderr,
    )
    if result.files_total > 0 and result.files_processed == 0:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
