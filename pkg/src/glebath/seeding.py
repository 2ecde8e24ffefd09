"""Deterministic seed derivation for ensembles.

Every trajectory gets its own generator derived from (master seed,
experiment id, trajectory index), so ensembles reproduce bit-identically
no matter how the work is scheduled.
"""

import hashlib

import numpy as np

__all__ = ["experiment_key", "derive_seed_sequence", "derive_rng"]


def experiment_key(experiment_id):
    """Stable 64-bit key for an experiment id string."""
    digest = hashlib.sha256(experiment_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed_sequence(master_seed, experiment_id, index=0):
    return np.random.SeedSequence(
        [int(master_seed) & (2**64 - 1), experiment_key(experiment_id), int(index)]
    )


def derive_rng(master_seed, experiment_id, index=0):
    """Generator for one trajectory of one experiment."""
    return np.random.default_rng(derive_seed_sequence(master_seed, experiment_id, index))
