"""Allow ``python -m cueaudit`` as an alias for the console script."""

from cueaudit.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
