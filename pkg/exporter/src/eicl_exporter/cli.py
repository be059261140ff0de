"""Command line entry point: flags mirror the export spec one to one."""
from __future__ import annotations

import argparse
import sys

from .errors import ExportError
from .export import MODE_CHOICES, POOLING_CHOICES, ExportSpec, export


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eicl-export",
        description="Run a checkpoint over a corpus and write a vector "
                    "store file for the recognition pipeline.",
    )
    parser.add_argument("--corpus", required=True, help="corpus JSONL path")
    parser.add_argument("--checkpoint", required=True,
                        help="model checkpoint directory or hub identifier")
    parser.add_argument("--output", required=True, help="store file to write")
    parser.add_argument("--pooling", choices=POOLING_CHOICES, default="mean",
                        help="hidden-state pooling, recorded in the header")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--mode", choices=MODE_CHOICES, default="classifier",
                        help="classifier: softmax probs + pooled vectors; "
                             "encoder: vectors with uniform probs")
    parser.add_argument("--max-length", type=int, default=128,
                        help="tokenizer truncation length")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = ExportSpec(
            corpus_path=args.corpus,
            checkpoint=args.checkpoint,
            output_path=args.output,
            pooling=args.pooling,
            batch_size=args.batch_size,
            mode=args.mode,
            max_length=args.max_length,
        )
        result = export(spec)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{result.output_path}")
    print(f"records={result.record_count} dimension={result.dimension} "
          f"labels={len(result.labels)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
