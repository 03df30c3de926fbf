"""Canonical JSON serialization shared by result files and API responses.

The canonical form is injective on JSON-safe values: UTF-8, keys sorted at
every nesting level, compact separators, floats as Python's shortest
round-trip repr, exactly one trailing LF.  Equal values always produce equal
bytes, which is what the determinism checks diff.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path


def canonical_dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_bytes(obj) -> bytes:
    return (canonical_dumps(obj) + "\n").encode("utf-8")


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Write via a temp file in the same directory plus rename.

    A reader concurrent with a crash mid-write sees either the old complete
    file or the new complete file, never a prefix.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def write_canonical_json(path: Path, obj) -> None:
    atomic_write_bytes(path, canonical_bytes(obj))
