"""CLI: render one figure from sweep output files."""

from __future__ import annotations

import argparse
import sys

from .errors import PlotvizError
from .figures import FIGURE_IDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="render sweep figures from CSV outputs"
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument(
        "--in",
        dest="inputs",
        nargs="+",
        required=True,
        help="input CSVs (fig1: the scan CSV followed by sequence-dump JSONs)",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--label", dest="labels", action="append", default=[])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        figure_id=args.figure_id,
        inputs=tuple(args.inputs),
        output=args.out,
        labels=tuple(args.labels),
    )
    try:
        render(spec)
    except (PlotvizError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
