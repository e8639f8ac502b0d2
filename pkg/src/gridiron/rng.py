"""Keyed, order-independent random substreams.

Every random draw in the prediction engine flows through a substream derived
from (seed, *key parts) so results never depend on scheduling order.  String
parts are hashed to 64-bit integers with SHA-256; numpy's SeedSequence then
expands the key material, which is deterministic and prefix-stable (the
first N words of a stream never change when more are requested).
"""

from __future__ import annotations

import hashlib

import numpy as np

GENERATOR_NAME = "PCG64"  # algorithm behind substream_rng, recorded in reports

_U64 = float(2 ** 64)


def stable_u64(text: str) -> int:
    """Platform-independent 64-bit hash of a string."""
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "little")


_MASK = (1 << 64) - 1


def _key(seed: int, parts: tuple) -> list[int]:
    material = [int(seed) & _MASK]
    for part in parts:
        material.append(stable_u64(part) if isinstance(part, str) else int(part) & _MASK)
    return material


def substream_rng(seed: int, *parts) -> np.random.Generator:
    """Generator seeded by (seed, *parts); identical keys give identical streams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_key(seed, parts))))


def substream_uniforms(seed: int, *parts, count: int) -> np.ndarray:
    """`count` uniforms in [0, 1) drawn directly from the keyed entropy stream.

    Word i is a pure function of (seed, *parts, i), so fixed positions are
    stable as `count` grows.
    """
    words = np.random.SeedSequence(_key(seed, parts)).generate_state(count, dtype=np.uint64)
    return words / _U64
