"""Per-surface Langevin runs mixed with canonical weights.

Each electron surface j contributes a potential lambda_j, a friction matrix
kappa_j and a bath log-determinant; the canonical weight is

    q_j  prop  Z_sys,j * Z_bath,j ,
    Z_sys,j = int exp(-(|P|^2/2 + lambda_j(X))/T) dX dP ,
    Z_bath,j prop det(Vbath_j)^(-1/2)  (equal bath dimensions assumed),

evaluated through log-determinant differences so nothing overflows.  Mixed
time-correlation observables average A(X_t, P_t) B(X_0, P_0) per surface
over Gibbs initial data and combine with the weights.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .langevin import LangevinConfig, langevin_run_ensemble

__all__ = [
    "Surface",
    "SurfaceWeights",
    "surface_weights",
    "mixed_observable",
    "sample_gibbs_positions",
]


@dataclass(frozen=True)
class Surface:
    """One electron surface: confining potential, friction, bath determinant."""

    potential: callable              # lambda_j(X), vectorized over (..., N)
    grad_potential: callable
    kappa: np.ndarray
    bath_logdet: float = 0.0         # log det of the bath quadratic form
    dim: int = 1
    name: str = ""
    position_sampler: callable = None   # optional (rng, n) -> (n, N) Gibbs draw
    envelope_center: np.ndarray | None = None
    envelope_scale: float | None = None


@dataclass(frozen=True)
class SurfaceWeights:
    q: np.ndarray
    stderr: np.ndarray
    method: str

    def __post_init__(self):
        if np.any(self.q < 0):
            raise ValueError("weights must be nonnegative")
        if abs(self.q.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")


def _check_confining(surface, T):
    # e^{-lambda/T} must decay along every axis; probe a radius ladder
    for radius in (3.0, 30.0, 300.0):
        for axis in range(surface.dim):
            for sign in (+1.0, -1.0):
                x_far = np.zeros(surface.dim)
                x_far[axis] = sign * radius * 10.0
                x_near = np.zeros(surface.dim)
                x_near[axis] = sign * radius
                if surface.potential(x_far) <= surface.potential(x_near):
                    raise ValueError(
                        f"surface {surface.name!r}: potential does not grow along "
                        f"axis {axis}; partition integral would diverge"
                    )


def _log_zsys_quadrature(surface, T):
    """log int e^{-lambda/T} dX for N <= 3, plus the Gaussian momentum factor."""
    n = surface.dim
    f = lambda *x: float(np.exp(-surface.potential(np.array(x)) / T))
    if n == 1:
        val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=1e-12, epsrel=1e-12)
    elif n == 2:
        val, _ = integrate.dblquad(
            lambda y, x: f(x, y), -np.inf, np.inf, -np.inf, np.inf,
            epsabs=1e-10, epsrel=1e-10)
    elif n == 3:
        val, _ = integrate.tplquad(
            lambda z, y, x: f(x, y, z), -np.inf, np.inf, -np.inf, np.inf,
            -np.inf, np.inf, epsabs=1e-9, epsrel=1e-9)
    else:
        raise ValueError("tensor quadrature supports N <= 3; use monte-carlo")
    return np.log(val) + 0.5 * n * np.log(2.0 * np.pi * T), 0.0


def _log_zsys_montecarlo(surface, T, rng, n_samples):
    """Importance estimate against a Gaussian envelope; returns (log Z, rel err)."""
    center = surface.envelope_center
    scale = surface.envelope_scale
    if center is None:
        center = np.zeros(surface.dim)
    if scale is None:
        scale = max(np.sqrt(T), 1.0) * 3.0
    x = center + scale * rng.standard_normal((n_samples, surface.dim))
    log_envelope = (
        -0.5 * np.sum(((x - center) / scale) ** 2, axis=-1)
        - surface.dim * np.log(scale * np.sqrt(2.0 * np.pi))
    )
    log_target = -surface.potential(x) / T
    w = np.exp(log_target - log_envelope)
    mean = w.mean()
    stderr = w.std(ddof=1) / np.sqrt(n_samples)
    return (np.log(mean) + 0.5 * surface.dim * np.log(2.0 * np.pi * T),
            stderr / mean)


def surface_weights(surfaces, T, method="quadrature", seed=0, n_samples=200_000):
    """Canonical probabilities q_j of the electron surfaces."""
    if T <= 0:
        raise ValueError("T must be positive")
    if len(surfaces) == 0:
        raise ValueError("need at least one surface")
    dims = {s.dim for s in surfaces}
    if len(dims) != 1:
        raise ValueError("surfaces must share the system dimension")
    rng = np.random.default_rng(seed)
    logz = np.empty(len(surfaces))
    relerr = np.zeros(len(surfaces))
    for i, s in enumerate(surfaces):
        _check_confining(s, T)
        if method == "quadrature":
            logz[i], relerr[i] = _log_zsys_quadrature(s, T)
        elif method == "monte-carlo":
            logz[i], relerr[i] = _log_zsys_montecarlo(s, T, rng, n_samples)
        else:
            raise ValueError("method must be 'quadrature' or 'monte-carlo'")
        logz[i] -= 0.5 * s.bath_logdet
    logz -= logz.max()
    z = np.exp(logz)
    q = z / z.sum()
    # delta-method propagation of the per-surface relative errors
    var_q = np.empty_like(q)
    for j in range(len(q)):
        grad = -q[j] * q
        grad[j] += q[j]
        var_q[j] = np.sum((grad * relerr) ** 2)
    return SurfaceWeights(q, np.sqrt(var_q), method)


def sample_gibbs_positions(surface, T, rng, n):
    """Draw X from exp(-lambda/T) by rejection against a Gaussian envelope."""
    if surface.position_sampler is not None:
        return surface.position_sampler(rng, n)
    center = surface.envelope_center
    scale = surface.envelope_scale
    if center is None:
        center = np.zeros(surface.dim)
    if scale is None:
        scale = max(np.sqrt(T), 1.0) * 2.0
    # bound of target/envelope-exponent ratio from a coarse scan
    probe = center + scale * np.linspace(-6, 6, 241)[:, None] * np.ones(surface.dim)
    log_ratio = (-surface.potential(probe) / T
                 + 0.5 * np.sum(((probe - center) / scale) ** 2, axis=-1))
    log_bound = np.max(log_ratio) + 0.5
    out = np.empty((n, surface.dim))
    got = 0
    attempts = 0
    while got < n:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError("rejection sampling failed; supply position_sampler")
        batch = max(n - got, 1024)
        x = center + scale * rng.standard_normal((batch, surface.dim))
        log_acc = (-surface.potential(x) / T
                   + 0.5 * np.sum(((x - center) / scale) ** 2, axis=-1)
                   - log_bound)
        keep = np.log(rng.random(batch)) < log_acc
        take = min(int(keep.sum()), n - got)
        out[got:got + take] = x[keep][:take]
        got += take
    return out


def mixed_observable(surfaces, weights, observable_a, observable_b, t, T, m,
                     dt, n_paths, seed):
    """Weighted time-correlation sum_j q_j E[A(X_t^j, P_t^j) B(X_0, P_0)].

    Initial data is Gibbs per surface (momenta exactly Gaussian, positions
    by the surface sampler); each surface evolves under its own Langevin
    dynamics.  Returns (value, stderr).
    """
    n_steps = int(round(t / dt))
    if abs(n_steps * dt - t) > 1e-9 * max(1.0, t):
        raise ValueError("t must be a multiple of dt")
    total = 0.0
    var = 0.0
    q = weights.q if isinstance(weights, SurfaceWeights) else np.asarray(weights)
    for j, s in enumerate(surfaces):
        rng = np.random.default_rng([seed, j])
        x0 = sample_gibbs_positions(s, T, rng, n_paths)
        p0 = np.sqrt(T) * rng.standard_normal((n_paths, s.dim))
        b_vals = np.asarray(observable_b(x0, p0), dtype=float)
        if n_steps == 0:
            xt, pt = x0, p0
        else:
            config = LangevinConfig(
                grad_potential=s.grad_potential, kappa=s.kappa, T=T,
                dt=dt, n_steps=n_steps, m=m)
            xt, pt = langevin_run_ensemble(config, x0, p0, rng)
        a_vals = np.asarray(observable_a(xt, pt), dtype=float)
        prod = a_vals * b_vals
        mean = prod.mean()
        stderr = prod.std(ddof=1) / np.sqrt(n_paths)
        total += q[j] * mean
        var += (q[j] * stderr) ** 2
    return float(total), float(np.sqrt(var))
