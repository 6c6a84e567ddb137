"""Versioned binary cache files for computed sequence tables.

Layout (little-endian): magic ``MFIB``, format version (u32), spec digest (32 bytes),
stored term count (u64), terminated flag (u8), then the terms as u64. When the flag is
set the table terminated at index count + 1.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np

from metafib.recursion.engine import SequenceTable, evaluate, extend
from metafib.recursion.spec import RecursionSpec
from metafib.storage.files import write_atomic
from metafib.utils.digest import spec_digest

logger = logging.getLogger(__name__)

MAGIC = b"MFIB"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sI32sQB")
CACHE_SUFFIX = ".mfib"


class CacheFormatError(ValueError):
    """Raised when a cache file is corrupt, truncated, or of another version."""


def save_table(table: SequenceTable, path: Path) -> None:
    """Write a table to a cache file atomically.

    Args:
        table: Table to persist.
        path: Destination file; its directory must exist.
    """
    terminated = table.terminated_at is not None
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        spec_digest(table.spec),
        table.computed_len,
        1 if terminated else 0,
    )
    write_atomic(path, header + table.terms.astype("<u8").tobytes())


def load_table(spec: RecursionSpec, path: Path) -> SequenceTable | None:
    """Load a cached table for a spec.

    Args:
        spec: Spec the caller expects the file to hold.
        path: Cache file.

    Returns:
        The table, or None if the file is missing or belongs to another spec.

    Raises:
        CacheFormatError: If the file is corrupt, truncated, or of another version.
    """
    if not path.exists():
        return None
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"truncated header in {path}")
    magic, version, digest, count, flag = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError(f"bad magic {magic!r} in {path}")
    if version != FORMAT_VERSION:
        raise CacheFormatError(f"unsupported format version {version} in {path}")
    if flag not in (0, 1):
        raise CacheFormatError(f"bad terminated flag {flag} in {path}")
    payload = data[_HEADER.size :]
    if len(payload) != 8 * count:
        raise CacheFormatError(
            f"truncated payload in {path}: expected {8 * count} bytes, got {len(payload)}",
        )
    if digest != spec_digest(spec):
        logger.warning(
            "Cache digest mismatch; ignoring file",
            extra={"path": str(path), "spec": str(spec)},
        )
        return None

    values = np.zeros(count + 1, dtype=np.int64)
    values[1:] = np.frombuffer(payload, dtype="<u8").astype(np.int64)
    values.flags.writeable = False
    return SequenceTable(spec=spec, values=values, terminated_at=count + 1 if flag else None)


class TableCache:
    """Directory of cache files keyed by spec digest."""

    def __init__(self, *, cache_dir: Path) -> None:
        """Initialize the cache.

        Args:
            cache_dir: Directory holding the cache files (created on first write).
        """
        self._cache_dir = cache_dir

    @property
    def cache_dir(self) -> Path:
        """Return the cache directory."""
        return self._cache_dir

    def path_for(self, spec: RecursionSpec) -> Path:
        """Return the cache file path for a spec."""
        return self._cache_dir / f"{spec_digest(spec).hex()}{CACHE_SUFFIX}"

    def get_or_evaluate(self, spec: RecursionSpec, n_max: int) -> SequenceTable:
        """Return ``evaluate(spec, n_max)``, reusing and refreshing the cache.

        Longer cached tables are cut to n_max; shorter ones are extended and re-saved.
        Corrupt files are recomputed and overwritten.

        Args:
            spec: Recursion specification.
            n_max: Requested horizon.

        Returns:
            The table for n_max terms (or fewer if the recursion terminates).
        """
        path = self.path_for(spec)
        try:
            cached = load_table(spec, path)
        except CacheFormatError as exc:
            logger.warning(
                "Discarding corrupt cache file",
                extra={"path": str(path), "error": str(exc)},
            )
            cached = None

        if cached is not None:
            if cached.computed_len >= n_max:
                logger.info("Cache hit", extra={"path": str(path), "n_max": n_max})
                if n_max < cached.computed_len:
                    return cached.head(n_max)
                # evaluate(spec, n_max) stops before the failing index.
                return SequenceTable(spec=spec, values=cached.values)
            if cached.terminated_at is not None:
                logger.info("Cache hit (terminated)", extra={"path": str(path)})
                return cached
            table = extend(cached, n_max)
        else:
            logger.info("Cache miss", extra={"path": str(path), "n_max": n_max})
            table = evaluate(spec, n_max)

        self._cache_dir.mkdir(parents=True, exist_ok=True)
        save_table(table, path)
        return table
