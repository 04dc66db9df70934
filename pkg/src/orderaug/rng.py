"""Deterministic RNG substreams.

All randomness in the toolkit flows from one root seed. Per-instance work
derives an independent stream from (seed, stream name), so per-instance
parallelism and input order changes cannot perturb each other's draws.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["substream"]


def substream(seed: int, *names: object) -> random.Random:
    """A ``random.Random`` keyed by the root seed and a path of names."""
    key = ":".join([str(seed), *(str(n) for n in names)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
