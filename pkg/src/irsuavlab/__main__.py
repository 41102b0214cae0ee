from __future__ import annotations

"""Module entry point to support `python -m irsuavlab`."""

from irsuavlab.cli.app import main


if __name__ == "__main__":  # pragma: no cover
    main()
