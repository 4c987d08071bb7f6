"""Content-addressed result cache for CLI operations.

Keys are sha256 hashes of the operation name, canonical inputs, and bounds;
hits require an exact tool-version match.  Entries are JSON files written via
atomic rename; corrupt or stale entries are ignored with a warning and the
result recomputed.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__

CACHE_DIR_ENV = "FUNCON_CACHE_DIR"


@dataclass(frozen=True)
class CacheEntry:
    key: str
    value: str
    tool_version: str


def cache_key(operation: str, canonical_inputs: str, bounds: dict) -> str:
    payload = json.dumps(
        {"operation": operation, "inputs": canonical_inputs, "bounds": bounds},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def resolve_cache_dir(flag_value: str | None) -> Path | None:
    """Cache directory from the flag, else the environment, else disabled."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_DIR_ENV)
    return Path(env) if env else None


class ResultCache:
    def __init__(self, directory: Path):
        self.directory = directory

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def load(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            raw = json.loads(path.read_text())
            entry = CacheEntry(raw["key"], raw["value"], raw["tool_version"])
        except (ValueError, KeyError, TypeError, OSError):
            print(f"warning: ignoring corrupt cache entry {path}", file=sys.stderr)
            return None
        if entry.key != key or entry.tool_version != __version__:
            return None
        return entry.value

    def store(self, key: str, value: str) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = CacheEntry(key, value, __version__)
        payload = json.dumps(
            {"key": entry.key, "value": entry.value, "tool_version": entry.tool_version}
        )
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
