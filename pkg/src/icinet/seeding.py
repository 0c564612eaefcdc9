"""Master-seed handling: one integer seed fans out into named, replayable streams."""

from __future__ import annotations

import os
import zlib

import numpy as np

SEED_ENV = "ICINET_SEED"


def resolve_seed(seed: int | None) -> int:
    """Explicit seed, else ``$ICINET_SEED``, else fresh OS entropy (64-bit)."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return int(np.random.SeedSequence().entropy % 2**63)


def substream_seed(master: int, name: str) -> int:
    ss = np.random.SeedSequence(master, spawn_key=(zlib.crc32(name.encode()),))
    return int(ss.generate_state(1, dtype=np.uint64)[0] % 2**63)


def substream(master: int, name: str) -> np.random.Generator:
    return np.random.default_rng(substream_seed(master, name))
