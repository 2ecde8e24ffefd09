"""Shared oracles: independent quadrature and closed-form references."""

import numpy as np
import pytest
from scipy.integrate import quad


def si_quadrature_oracle(x):
    """Adaptive quadrature of int_0^x sin(s)/s ds, independent of the
    series/continued-fraction implementation."""
    x = float(x)
    if x <= 1.0:
        val, _ = quad(lambda s: np.sinc(s / np.pi), 0.0, x,
                      epsabs=1e-13, epsrel=1e-13)
        return val
    head, _ = quad(lambda s: np.sinc(s / np.pi), 0.0, 1.0,
                   epsabs=1e-13, epsrel=1e-13)
    tail, _ = quad(lambda s: 1.0 / s, 1.0, x, weight="sin", wvar=1.0,
                   epsabs=5e-13, limit=4000)
    return head + tail


def damping_quadrature_oracle(t_grid_half, momenta_half_grid, target, m):
    """int_0^target sin((target-s)/sqrt(m))/(target-s) * Phat(s) ds with Phat
    piecewise constant on the half-step grid (value j on [s_j, s_j+1))."""
    total = 0.0
    sm = np.sqrt(m)
    for j in range(len(momenta_half_grid)):
        a, b = t_grid_half[j], t_grid_half[j + 1]
        b = min(b, target)
        if b <= a:
            continue

        def integrand(s):
            u = (target - s) / sm
            return np.sinc(u / np.pi) / sm if u != 0 else 1.0 / sm

        val, _ = quad(integrand, a, b, epsabs=1e-13, epsrel=1e-13, limit=500)
        total += momenta_half_grid[j] * val
    return total


def damped_oscillator_autocovariance(lag, gamma, omega0, variance):
    """Stationary position autocovariance of dX=Pdt, dP=-omega0^2 X dt
    - gamma P dt + noise, valid in both damping regimes via complex omega1."""
    lag = np.abs(np.asarray(lag, dtype=float))
    om1 = np.lib.scimath.sqrt(omega0**2 - 0.25 * gamma**2)
    val = np.exp(-0.5 * gamma * lag) * (
        np.cos(om1 * lag) + 0.5 * gamma / om1 * np.sin(om1 * lag)
    )
    return variance * val.real


def damped_oscillator_momentum_autocovariance(lag, gamma, omega0, variance):
    lag = np.abs(np.asarray(lag, dtype=float))
    om1 = np.lib.scimath.sqrt(omega0**2 - 0.25 * gamma**2)
    val = np.exp(-0.5 * gamma * lag) * (
        np.cos(om1 * lag) - 0.5 * gamma / om1 * np.sin(om1 * lag)
    )
    return variance * val.real


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
