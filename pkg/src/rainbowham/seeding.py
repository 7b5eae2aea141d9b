"""Deterministic seed derivation.

All randomness in the package flows from a single root seed through
``derive_seed(root, *labels)``, so any stage or trial can be replayed in
isolation.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(root: int, *labels) -> int:
    """Derive a child seed from a root seed and a label path.

    Labels may be strings or integers; the derivation is stable across runs
    and platforms (no reliance on salted ``hash()``).
    """
    key = str(int(root)) + "".join(f"/{lab}" for lab in labels)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(root: int, *labels) -> random.Random:
    """A ``random.Random`` seeded by ``derive_seed(root, *labels)``."""
    return random.Random(derive_seed(root, *labels))
