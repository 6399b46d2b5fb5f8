"""Module entry point: python -m eigenreflect <subcommand> ..."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
