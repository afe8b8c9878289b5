"""Command line entry point for figure rendering."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, FigureError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prism-plots",
        description="Render figures from discovery experiment aggregate CSVs.",
    )
    parser.add_argument("--input", required=True, help="aggregate CSV path")
    parser.add_argument("--figure", required=True, choices=FIGURES)
    parser.add_argument("--out", required=True, help="output image path (.png or .svg)")
    parser.add_argument("--L", type=int, default=None, help="restrict to one degree")
    parser.add_argument("--c", type=float, default=None, help="restrict to one c value")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(input=args.input, figure=args.figure, out=args.out,
                          L=args.L, c=args.c)
        path = render(spec)
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
