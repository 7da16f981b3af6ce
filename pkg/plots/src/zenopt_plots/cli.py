"""Batch figure rendering from a directory of experiment CSVs.

Exit codes follow the simulator CLI: 0 rendered, 1 output failure, 2 usage
problems (missing data directory, unknown recipe, CSVs violating the
contract).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .recipes import RECIPE_INDEX
from .render import render_all
from .tables import TableError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenopt-plots",
        description="Render the experiment-catalog figures from their CSVs.",
    )
    parser.add_argument("data_dir", nargs="?", help="directory holding the CSVs")
    parser.add_argument("--out", metavar="DIR",
                        help="image directory (default: DATA_DIR/figures)")
    parser.add_argument("--only", action="append", metavar="NAME",
                        help="render just this recipe; repeatable")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    parser.add_argument("--list", action="store_true",
                        help="print recipe names and exit")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.list:
        for name in sorted(RECIPE_INDEX):
            print(name)
        return 0
    if args.data_dir is None:
        print("error: data directory required (or --list)", file=sys.stderr)
        return 2
    data_dir = Path(args.data_dir)
    if not data_dir.is_dir():
        print(f"error: {data_dir} is not a directory", file=sys.stderr)
        return 2
    for name in args.only or ():
        if name not in RECIPE_INDEX:
            print(f"error: unknown recipe {name!r}; --list shows them",
                  file=sys.stderr)
            return 2
    out_dir = Path(args.out) if args.out else data_dir / "figures"
    try:
        paths = render_all(data_dir, out_dir, names=args.only, fmt=args.format)
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot write images: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
