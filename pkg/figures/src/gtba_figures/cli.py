"""`figures <spec.json> [more specs...]` entry point."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import load_spec


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render beam-alignment experiment CSVs into comparison figures",
    )
    parser.add_argument("specs", nargs="+", help="figure spec JSON files")
    args = parser.parse_args(argv)
    for spec_path in args.specs:
        try:
            result = render(load_spec(spec_path))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"wrote {result.out_path} ({result.n_series} series, {result.n_points} points)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
