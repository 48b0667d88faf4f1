"""Seeded random streams.

Every stochastic operation draws from numpy's PCG64 generator. A caller seed
is expanded with ``SeedSequence`` and split into independent child streams, one
per operation, so adding draws to one step never shifts another step.
"""

import hashlib
from typing import List

import numpy as np

from ..utils.errors import ConfigError

MAX_SEED = 2**64


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < MAX_SEED:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def rng_streams(seed: int, count: int) -> List[np.random.Generator]:
    children = np.random.SeedSequence(check_seed(seed)).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def child_seeds(seed: int, count: int) -> List[int]:
    """Derived 64-bit seeds, e.g. one per mixture of a corpus."""
    children = np.random.SeedSequence(check_seed(seed)).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def name_seed(name: str, seed: int = 0) -> int:
    """Stable seed for a string key (speaker names), independent of PYTHONHASHSEED."""
    digest = hashlib.sha256(f"{check_seed(seed)}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
