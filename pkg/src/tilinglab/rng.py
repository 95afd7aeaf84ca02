"""Splittable seed discipline.

All randomness in the package flows from a single 64-bit base seed.  Child
seeds are derived by hashing the base together with a path of string/int
labels, so any trial of any experiment can be replayed in isolation:

    derive_seed(base, "cell", 3, "trial", 17)

The derivation is SHA-256 over the joined path, truncated to 64 bits.  It is
stable across platforms and Python versions.
"""

from __future__ import annotations

import hashlib
import random

MASK64 = (1 << 64) - 1


def derive_seed(base: int, *path: int | str) -> int:
    """Derive a child seed from `base` and a label path."""
    key = "/".join([str(int(base) & MASK64)] + [str(p) for p in path])
    digest = hashlib.sha256(key.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(base: int, *path: int | str) -> random.Random:
    """A `random.Random` seeded by `derive_seed(base, *path)`."""
    return random.Random(derive_seed(base, *path))
