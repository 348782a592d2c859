"""Command-line entry point.

    plots fig2|fig3|fig4|figS2 --in <csv...> --out <path>
        [--log-y] [--linear-x] [--split-at NS]

Exit codes: 0 success, 2 bad arguments or ill-formed input CSV.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib.pyplot as plt

from .csvio import CsvFormatError
from .figures import FIGURE_IDS, FigureSpec, render

EXIT_OK = 0
EXIT_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots", description="Regenerate preset figures from simulator CSV output"
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS, help="which preset figure to draw")
    parser.add_argument(
        "--in", dest="inputs", nargs="+", required=True, type=Path, metavar="CSV",
        help="input CSV file(s); for fig2 the atoms/reference/linear roles are "
        "matched by filename",
    )
    parser.add_argument("--out", required=True, type=Path, help="output image path")
    parser.add_argument("--log-y", action="store_true", help="logarithmic power axis (fig2)")
    parser.add_argument(
        "--linear-x", action="store_true", help="linear pulse-area axis (fig3; default log)"
    )
    parser.add_argument(
        "--split-at", type=float, default=0.0,
        help="time where fig2 rescales its y-axis (default 0 ns)",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    spec = FigureSpec(
        figure_id=args.figure_id,
        inputs=tuple(args.inputs),
        output=args.out,
        log_y=args.log_y,
        log_x=not args.linear_x,
        split_at=args.split_at,
    )
    try:
        result = render(spec)
    except (CsvFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    plt.close(result.figure)
    print(f"wrote {result.output} ({result.series} series)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
