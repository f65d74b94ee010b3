"""
Deterministic random streams for reproducible simulations.

Every trial draws from its own Generator keyed by (seed, trial_index,
stream), so results do not depend on execution order or thread count.
"""

from typing import Optional

import numpy as np

# Named sub-streams inside one trial
STREAM_TREE = 0
STREAM_ENVIRONMENT = 1
STREAM_WALK = 2
STREAM_POOL = 3


def trial_rng(seed: Optional[int], trial_index: int = 0, stream: int = 0) -> np.random.Generator:
    """Generator for one (seed, trial, stream) triple."""
    entropy = 0 if seed is None else int(seed)
    return np.random.default_rng(
        np.random.SeedSequence(entropy, spawn_key=(int(trial_index), int(stream)))
    )
