"""Regenerate the bundled fixture games under src/sagasolve/games/."""

from __future__ import annotations

import argparse
from pathlib import Path

from sagasolve.dbformat import serialize_database, validate
from sagasolve.fixtures import FIXTURES

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "src" / "sagasolve" / "games"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in FIXTURES.items():
        db = build()
        problems = validate(db)
        if problems:
            raise SystemExit(f"{name}: " + "; ".join(map(str, problems)))
        path = args.out / f"{name}.dat"
        path.write_text(serialize_database(db), encoding="latin-1")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
