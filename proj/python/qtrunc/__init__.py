"""Certified truncation thresholds for bosonic modes and gauge links."""

from ._qtrunc import *  # noqa: F401,F403
from ._qtrunc import __version__

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
