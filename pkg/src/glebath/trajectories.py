"""Shared trajectory container for the stochastic integrators."""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Trajectory"]


@dataclass(frozen=True)
class Trajectory:
    """Full-step samples of positions and momenta, shapes (n_steps+1, N)."""

    t: np.ndarray
    X: np.ndarray
    P: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.t.shape[0] == self.X.shape[0] == self.P.shape[0]):
            raise ValueError("grid/state length mismatch")

    @property
    def dim(self):
        return self.X.shape[1]
