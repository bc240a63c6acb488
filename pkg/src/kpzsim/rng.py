"""Reproducible random streams.

Every stochastic component draws from a counter-based Philox generator keyed
by a root seed plus a structured path (purpose string, trajectory or block
index, ...).  Streams with different paths are statistically independent and
their construction order does not matter, so trajectory-level work can be
scheduled in any order, on any number of workers, without changing results.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["stream"]


def _path_key(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    return int(part) & 0xFFFFFFFF


def stream(seed: int, *path) -> np.random.Generator:
    """Return a Philox generator keyed by ``(seed, *path)``.

    ``path`` entries may be ints or short strings (e.g. ``stream(7, "asep",
    block)``).  Identical keys always yield identical streams.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_path_key(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))
