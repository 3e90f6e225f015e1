"""Catalog tooling CLI."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import load_catalog, validate_catalog
from .errors import CatalogError, GameError


def catalog_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="inkduel-catalog", description="Validate game content files.")
    sub = parser.add_subparsers(dest="command", required=True)
    validate = sub.add_parser("validate", help="check a catalog file; nonzero exit on violations")
    validate.add_argument("path", help="catalog JSON file")
    args = parser.parse_args(argv)

    if args.command == "validate":
        try:
            data = Path(args.path).read_bytes()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            catalog = load_catalog(data)
        except CatalogError as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return 1
        except GameError as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return 1
        violations = validate_catalog(catalog)
        if violations:
            for violation in violations:
                print(f"violation: {violation}", file=sys.stderr)
            return 1
        print(
            f"ok: {len(catalog.prompts)} prompts, {len(catalog.archetypes)} archetypes, "
            f"{len(catalog.moves)} moves, {len(catalog.premade_cards)} premade cards"
        )
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(catalog_main())
