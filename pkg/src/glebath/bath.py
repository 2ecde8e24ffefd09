"""Finite-lattice bath integrator: the ground truth the kernel route must match.

Works entirely in the real eigenbasis of the lattice Hessian, so the state
is one complex amplitude per mode (the position deviation in the real part,
the scaled momentum in the imaginary part).  One step is the palindromic
splitting

    kick(h/2)  rotate(h/2)  drift(h)  rotate(h/2)  kick(h/2)

with the rotation exact per mode and the drift moving both the system
position and the mode amplitudes (the equilibrium positions track X).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GibbsBathSample",
    "sample_bath_initial",
    "BathTrajectory",
    "bath_run",
    "bath_energy",
    "mode_energies",
]


@dataclass(frozen=True)
class GibbsBathSample:
    """gamma_k = gamma_r + i gamma_i per mode, both N(0, T/omega_k^2)."""

    gamma_r: np.ndarray
    gamma_i: np.ndarray
    T: float
    seed: int | None = None

    @property
    def gamma(self):
        return self.gamma_r + 1j * self.gamma_i


def sample_bath_initial(modes, T, seed):
    """Draw the Gibbs-distributed initial mode amplitudes.

    Requires every mode frequency positive (eta > 0); variance per real
    component is T/omega^2.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if np.any(modes.omega <= 0):
        raise ValueError("all mode frequencies must be positive (eta > 0)")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    std = np.sqrt(T) / modes.omega
    gr = rng.normal(0.0, 1.0, modes.n_modes) * std
    gi = rng.normal(0.0, 1.0, modes.n_modes) * std
    return GibbsBathSample(gr, gi, float(T), seed if isinstance(seed, int) else None)


@dataclass(frozen=True)
class BathTrajectory:
    t: np.ndarray
    X: np.ndarray            # (n_steps+1, N)
    P: np.ndarray
    gamma_final: np.ndarray
    coupling_force: np.ndarray   # (n_steps+1, N): <V'' phi, grad a> at full steps
    energy: np.ndarray            # (n_steps+1,)


def bath_run(modes, grad_potential, potential, sample, x0, p0, dt, n_steps,
             frozen_system=False):
    """Integrate the coupled system + bath; returns full-step trajectory.

    grad_potential / potential act on the system coordinates only.  With
    frozen_system=True the (X, P) updates and the mode forcing are switched
    off, leaving the exact free rotation (the mass -> infinity limit).
    """
    m = modes.spec.m
    om = modes.omega
    om2 = om * om
    b = modes.b
    X = np.array(x0, dtype=float).copy()
    P = np.array(p0, dtype=float).copy()
    if X.shape != (modes.n_coords,) or P.shape != (modes.n_coords,):
        raise ValueError("x0/p0 must match the coupling dimension")
    g = sample.gamma.astype(complex)

    rot_half = np.exp(-1j * om * dt / (2.0 * np.sqrt(m)))
    t = dt * np.arange(n_steps + 1)
    Xs = np.empty((n_steps + 1, X.size))
    Ps = np.empty_like(Xs)
    Fs = np.empty_like(Xs)
    Es = np.empty(n_steps + 1)
    Xs[0], Ps[0] = X, P
    Fs[0] = g.real @ b
    Es[0] = bath_energy(modes, potential, X, P, g)

    for n in range(n_steps):
        if not frozen_system:
            P = P + 0.5 * dt * (-grad_potential(X) + g.real @ b)
        g = g * rot_half
        if not frozen_system:
            X = X + dt * P
            g = g - dt * (b @ P) / om2
        g = g * rot_half
        if not frozen_system:
            P = P + 0.5 * dt * (-grad_potential(X) + g.real @ b)
        Xs[n + 1], Ps[n + 1] = X, P
        Fs[n + 1] = g.real @ b
        Es[n + 1] = bath_energy(modes, potential, X, P, g)

    return BathTrajectory(t, Xs, Ps, g, Fs, Es)


def bath_energy(modes, potential, X, P, gamma):
    """Total energy |P|^2/2 + lambda(X) + (1/2) sum omega^2 |gamma|^2."""
    bath = 0.5 * np.sum(modes.omega**2 * np.abs(gamma) ** 2)
    return 0.5 * float(P @ P) + float(potential(X)) + bath


def mode_energies(modes, gamma):
    """Per-mode bath energies omega^2 |gamma|^2 / 2 with mode labels."""
    return 0.5 * modes.omega**2 * np.abs(gamma) ** 2
