from __future__ import annotations

import sys
from pathlib import Path


def read_text(source: str) -> str:
    """Contents of a file path, or of stdin for "-"."""
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")
