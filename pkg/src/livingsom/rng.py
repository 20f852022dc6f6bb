"""Named random substreams derived from a single integer seed."""
import zlib

import numpy as np


def _sequence(seed: int, name: str) -> np.random.SeedSequence:
    if int(seed) < 0:
        raise ValueError("seed must be non-negative")
    # crc32 rather than hash(): stable across interpreter runs
    return np.random.SeedSequence([int(seed), zlib.crc32(name.encode("utf-8"))])


def derive_seed(seed: int, name: str) -> int:
    return int(_sequence(seed, name).generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def substream(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(_sequence(seed, name))
