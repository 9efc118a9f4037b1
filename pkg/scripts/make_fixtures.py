"""Regenerate the JSON fixtures shipped in src/freeset/data."""

import argparse
from pathlib import Path

from freeset.harness import write_fixture_files


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    default = Path(__file__).resolve().parents[1] / "src" / "freeset" / "data"
    ap.add_argument("--out", type=Path, default=default)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for p in write_fixture_files(args.out):
        print(p)


if __name__ == "__main__":
    main()
