"""Stable digests for specs and files."""

from __future__ import annotations

import hashlib
from pathlib import Path

from metafib.recursion.spec import RecursionSpec, render_spec


def spec_digest(spec: RecursionSpec) -> bytes:
    """Return the SHA-256 digest (32 bytes) of the canonical spec rendering.

    Args:
        spec: Recursion specification.

    Returns:
        Raw digest bytes.
    """
    return hashlib.sha256(render_spec(spec).encode("ascii")).digest()


def sha256_file_hex(path: Path, *, chunk_size: int = 1024 * 1024) -> str:
    """Return the SHA-256 hex digest for a file on disk.

    Args:
        path: Path to the file.
        chunk_size: Chunk size for streaming reads.

    Returns:
        Hex-encoded SHA-256 digest.
    """
    hasher = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(chunk_size), b""):
            hasher.update(chunk)
    return hasher.hexdigest()
