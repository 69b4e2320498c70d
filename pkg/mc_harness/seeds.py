"""Per-replicate seed derivation."""

import numpy as np


def replicate_seed(master: int, n: int, rep: int) -> int:
    """64-bit seed of replicate `rep` at resolution `n`, hashed from the master seed."""
    sequence = np.random.SeedSequence(master, spawn_key=(n, rep))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
