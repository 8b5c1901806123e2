"""Common utilities for the monorepo."""

import json
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional


def save_json(data: dict[str, Any], file_path: Path) -> None:
    """Save JSON data to a file."""
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(canonical_json(data, indent=2))
        f.write("\n")


def canonical_json(data: Any, indent: Optional[int] = None) -> str:
    """Serialize with sorted keys so identical data gives identical text."""
    separators = (",", ": ") if indent else (",", ":")
    return json.dumps(
        data, sort_keys=True, indent=indent, ensure_ascii=False, separators=separators
    )


@contextmanager
def timed(timings: Dict[str, float], label: str) -> Iterator[None]:
    """Record the wall time of the block, in milliseconds, under ``label``."""
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[label] = round((time.perf_counter() - start) * 1000.0, 3)


def truncate_string(text: str, max_length: int = 100, suffix: str = "...") -> str:
    """Truncate a string to a maximum length."""
    if len(text) <= max_length:
        return text
    return text[: max_length - len(suffix)] + suffix
