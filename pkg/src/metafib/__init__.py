"""metafib: meta-Fibonacci sequences and their spot-based generation structures."""

from __future__ import annotations

__all__ = ["__version__"]

__version__ = "0.1.0"
