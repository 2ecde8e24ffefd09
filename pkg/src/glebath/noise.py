"""Sampling the Gaussian fluctuation process.

Two exact routes to a mean-zero path with covariance T K((t-s)/sqrt(m)):

* Toeplitz square root of the grid covariance (limit kernel), zeta = S xi;
* finite-lattice spectral synthesis from a Gibbs mode sample, which shares
  its randomness with the bath integrator so both dynamics can be driven by
  one realization.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

__all__ = [
    "NoisePath",
    "CovarianceFactor",
    "toeplitz_covariance",
    "noise_covariance",
    "sqrt_psd",
    "sample_noise_path",
    "sample_noise_ensemble",
    "spectral_noise_finite",
]

EIG_CLIP_REL = 1e-8       # eigenvalues above -EIG_CLIP_REL*lam_max clip to zero


@dataclass(frozen=True)
class NoisePath:
    """Fluctuation samples on a uniform grid, values shape (n_times, N)."""

    t: np.ndarray
    values: np.ndarray
    meta: dict

    def __post_init__(self):
        if self.values.shape[0] != self.t.shape[0]:
            raise ValueError("grid/value length mismatch")

    @property
    def dim(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class CovarianceFactor:
    """Symmetric factor S with S S^T ~= Sigma after PSD clipping."""

    factor: np.ndarray
    clipped_floor: float
    relative_reconstruction_error: float


def toeplitz_covariance(kern, entry, dt, n_steps, T, m):
    """(n_steps+1)^2 Toeplitz matrix Sigma_ij = T K_entry(|t_i - t_j|/sqrt(m)).

    entry is an (l, l') index pair into the kernel matrix.
    """
    if dt <= 0 or m <= 0:
        raise ValueError("dt and m must be positive")
    if T < 0:
        raise ValueError("T must be nonnegative")
    i, j = entry
    lags = dt * np.arange(n_steps + 1) / np.sqrt(m)
    first_row = T * kern(lags)[..., i, j]
    return toeplitz(first_row)


def noise_covariance(kern, dt, n_steps, T, m):
    """Full block covariance of the stacked path (zeta(t_0), ..., zeta(t_n)),
    shape ((n+1) N, (n+1) N); falls back to this only for multi-component
    kernels without proportional entries (cost warning: dense eigh)."""
    if dt <= 0 or m <= 0:
        raise ValueError("dt and m must be positive")
    lags = dt * np.arange(n_steps + 1) / np.sqrt(m)
    blocks = T * kern(lags)                       # (n+1, N, N)
    n1 = n_steps + 1
    dim = blocks.shape[-1]
    idx = np.abs(np.arange(n1)[:, None] - np.arange(n1)[None, :])
    big = blocks[idx]                             # (n+1, n+1, N, N)
    return big.transpose(0, 2, 1, 3).reshape(n1 * dim, n1 * dim)


def sqrt_psd(sigma):
    """Symmetric PSD square root by eigendecomposition with a small clip.

    Eigenvalues in [-EIG_CLIP_REL*lam_max, 0) are treated as quadrature noise
    and clipped to zero; anything more negative rejects the input.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValueError("sigma must be square")
    if not np.allclose(sigma, sigma.T, atol=1e-10 * max(1.0, np.abs(sigma).max())):
        raise ValueError("sigma must be symmetric")
    lam, U = np.linalg.eigh(0.5 * (sigma + sigma.T))
    lam_max = float(lam[-1])
    if lam_max <= 0.0:
        if np.any(lam < -1e-14):
            raise ValueError("sigma is not positive semidefinite")
        return CovarianceFactor(np.zeros_like(sigma), 0.0, 0.0)
    floor = -EIG_CLIP_REL * lam_max
    if lam[0] < floor:
        raise ValueError(
            f"sigma is not PSD: min eigenvalue {lam[0]:.3e} < {floor:.3e}"
        )
    lam_clip = np.clip(lam, 0.0, None)
    S = (U * np.sqrt(lam_clip)) @ U.T
    resid = np.abs(S @ S.T - sigma).max() / np.abs(sigma).max()
    return CovarianceFactor(S, floor, float(resid))


def sample_noise_path(factor, seed, t=None, meta=None):
    """zeta = S xi with xi iid standard normal from the seeded generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    S = factor.factor
    xi = rng.standard_normal(S.shape[1])
    values = (S @ xi)[:, None]
    if t is None:
        t = np.arange(S.shape[0], dtype=float)
    info = {"method": "toeplitz"}
    if meta:
        info.update(meta)
    if not isinstance(seed, np.random.Generator):
        info.setdefault("seed", seed)
    return NoisePath(np.asarray(t, dtype=float), values, info)


def sample_noise_ensemble(factor, rng, n_paths):
    """(n_times, n_paths) matrix of independent scalar noise paths."""
    xi = rng.standard_normal((factor.factor.shape[1], n_paths))
    return factor.factor @ xi


def spectral_noise_finite(modes, sample, t, m, meta=None):
    """Finite-bath fluctuation from a Gibbs mode sample, exact on the grid:

        zeta_l(t) = sum_k b_{k,l} (gamma_r cos(omega t/sqrt(m))
                                   + gamma_i sin(omega t/sqrt(m)))

    Reusing the same sample in the bath integrator reproduces this force
    along a frozen-system trajectory to round-off.
    """
    t = np.asarray(t, dtype=float)
    phase = np.multiply.outer(t, modes.omega) / np.sqrt(m)
    z = np.cos(phase) * sample.gamma_r + np.sin(phase) * sample.gamma_i
    values = z @ modes.b
    info = {"method": "spectral", "m": m, "T": sample.T}
    if meta:
        info.update(meta)
    if sample.seed is not None:
        info.setdefault("seed", sample.seed)
    return NoisePath(t, values, info)
