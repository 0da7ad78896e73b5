from __future__ import annotations

from polyset.main import main


if __name__ == "__main__":
    raise SystemExit(main())
