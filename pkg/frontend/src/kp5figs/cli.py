"""`kp5-figs`: render figures from a kp5 artifact manifest."""

from __future__ import annotations

import argparse
import sys

from kp5figs.artifacts import FIGURE_SETS
from kp5figs.errors import FigureError, ManifestError
from kp5figs.render import render


def _parse_which(text: str) -> list[str]:
    names = [w.strip() for w in text.split(",") if w.strip()]
    bad = [w for w in names if w not in FIGURE_SETS]
    if bad:
        raise argparse.ArgumentTypeError(
            f"unknown figure set(s) {bad}; choose from {', '.join(FIGURE_SETS)}"
        )
    return names


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="kp5-figs", description="Render figures from kp5 CSV/JSON artifacts"
    )
    p.add_argument("--manifest", required=True, help="path to manifest.json")
    p.add_argument("--out", required=True, help="output directory for figures")
    p.add_argument(
        "--which",
        type=_parse_which,
        default=None,
        help=f"comma-separated figure sets ({', '.join(FIGURE_SETS)}); "
        "default: every set whose table is present",
    )
    args = p.parse_args(argv)
    try:
        rep = render(args.manifest, args.out, args.which)
    except ManifestError as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return 2
    except FigureError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for w in rep["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    for path in rep["written"]:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
