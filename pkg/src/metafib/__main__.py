"""Console entrypoint for `metafib`."""

from __future__ import annotations

import sys

from metafib.cli.app import run


def main() -> int:
    """Run the Typer CLI application.

    Returns:
        Process exit code.
    """
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
