"""Splitting integrator for the generalized Langevin dynamics.

The damping convolution int_0^t K((t-s)/sqrt(m)) P(s) ds is evaluated from
exact antiderivatives of the kernel on the half-step grid.  Two quadrature
rules are provided:

* "midpoint" (default): the damping is evaluated at the full-step kick
  times t_n and t_{n+1}, with the half-step momentum P_{k+1/2} standing for
  the velocity on the whole interval [t_k, t_{k+1}] -- exactly the velocity
  the position update uses.  Against the finite-bath integrator this rule
  is second order (the bath splitting unrolls to the same structure with
  pointwise instead of interval-averaged weights).

* "printed": the staircase rule with momenta P_k on [t_k, t_{k+1/2}] and
  P_{k+1/2} on [t_{k+1/2}, t_{k+1}], damping targets t_{n+1/2} and t_{n+1}.
  Kept for reproducing the published scheme; its damping quadrature is one
  sided and first order against the bath dynamics.

For the demonstration kernel both rules reduce to sums of sine-integral
increments; general kernels use the same tables built from numeric
antiderivatives.
"""

from dataclasses import dataclass, field

import numpy as np

from .sineint import si
from .trajectories import Trajectory

__all__ = [
    "SineIntegralTable",
    "DampingTable",
    "GleState",
    "damping_convolution",
    "gle_run",
    "gle_run_ensemble_scalar",
    "reduced_example_damping",
    "REDUCED_EXAMPLE_PREFACTOR",
]

# sum over the three identical kernel rows of the demonstration coupling:
# the reduced damping is 12 pi sqrt(m) * Si increments
REDUCED_EXAMPLE_PREFACTOR = 12.0 * np.pi


@dataclass(frozen=True)
class SineIntegralTable:
    """Si on the half-step grid t_{j/2}/sqrt(m) with the scheme's increments.

    first_half[i]  = Si(t_{i+1/2}/sqrt(m)) - Si(t_i/sqrt(m))      (Delta Si_i)
    second_half[i] = Si(t_{i+1}/sqrt(m))   - Si(t_{i+1/2}/sqrt(m)) (Delta Si_{i+1/2})
    """

    dt: float
    n_steps: int
    m: float
    values: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.values is None:
            grid = 0.5 * self.dt * np.arange(2 * self.n_steps + 3) / np.sqrt(self.m)
            object.__setattr__(self, "values", si(grid))

    @property
    def first_half(self):
        return self.values[1::2] - self.values[0:-1:2]

    @property
    def second_half(self):
        return self.values[2::2] - self.values[1::2]

    @property
    def full(self):
        return self.values[2::2] - self.values[0:-1:2]


class DampingTable:
    """Interval weights sqrt(m) * (K-antiderivative differences) for one grid.

    c[i] integrates K((t*-s)/sqrt(m)) over a half interval at lag offsets
    [t_i, t_{i+1/2}] from the target, d[i] over [t_{i+1/2}, t_{i+1}], and
    full[i] = c[i] + d[i] over the whole interval.  Entries are (N, N)
    matrices (or scalars for reduced dynamics).
    """

    def __init__(self, antiderivative, dt, n_steps, m):
        sm = np.sqrt(m)
        grid = 0.5 * dt * np.arange(2 * n_steps + 3) / sm
        A = sm * np.asarray(antiderivative(grid))
        self.c = A[1::2] - A[0:-1:2]
        self.d = A[2::2] - A[1::2]
        self.full = self.c + self.d
        self.dt = dt
        self.n_steps = n_steps
        self.m = m

    @classmethod
    def from_kernel(cls, kern, dt, n_steps, m):
        return cls(kern.antiderivative, dt, n_steps, m)

    @classmethod
    def from_sine_table(cls, table, prefactor):
        """Reduced table: prefactor * sqrt(m) * Delta Si increments."""
        obj = cls.__new__(cls)
        scale = prefactor * np.sqrt(table.m)
        obj.c = scale * table.first_half
        obj.d = scale * table.second_half
        obj.full = obj.c + obj.d
        obj.dt = table.dt
        obj.n_steps = table.n_steps
        obj.m = table.m
        return obj


def reduced_example_damping(dt, n_steps, m):
    """Damping table of the reduced demonstration dynamics (12 pi Si route)."""
    return DampingTable.from_sine_table(
        SineIntegralTable(dt, n_steps, m), REDUCED_EXAMPLE_PREFACTOR
    )


@dataclass
class GleState:
    """History the damping convolution needs: all past momenta."""

    step: int
    full_momenta: np.ndarray    # (step+1, ...) P at t_0..t_step
    half_momenta: np.ndarray    # (step, ...)   P at t_{1/2}..t_{step-1/2}


def _contract(weights, values):
    # weights (k,) scalars or (k,N,N); values (k,) or (k,N)
    if weights.ndim == 1:
        return weights @ values
    return np.einsum("kij,kj->i", weights, values)


def damping_convolution(state, table, prefactor=1.0, target="full"):
    """Published staircase quadrature of the damping integral at step n.

    target="half": integral up to t_{n+1/2} (first half-kick),

        sum_{k<=n} P_k DeltaSi_{n-k} + sum_{k<=n-1} P_{k+1/2} DeltaSi_{n-1/2-k},

    needing n+1 full and n half momenta.  target="full": integral up to
    t_{n+1} (second half-kick),

        sum_{k<=n} P_k DeltaSi_{n+1/2-k} + P_{k+1/2} DeltaSi_{n-k},

    needing n+1 of each (the current half momentum included).  With a
    SineIntegralTable the result is prefactor * sqrt(m) * (increment sums);
    a DampingTable carries its weights ready-made.
    """
    n = state.step
    Pf = np.asarray(state.full_momenta)
    Ph = np.asarray(state.half_momenta)
    if isinstance(table, SineIntegralTable):
        scale = prefactor * np.sqrt(table.m)
        c = scale * table.first_half
        d = scale * table.second_half
    else:
        c, d = table.c, table.d
    if target == "full":
        if Pf.shape[0] != n + 1 or Ph.shape[0] != n + 1:
            raise ValueError("full target needs n+1 full and n+1 half momenta")
        return _contract(d[: n + 1][::-1], Pf) + _contract(c[: n + 1][::-1], Ph)
    if target == "half":
        if Pf.shape[0] != n + 1 or Ph.shape[0] != n:
            raise ValueError("half target needs n+1 full and n half momenta")
        total = _contract(c[: n + 1][::-1], Pf)
        if n >= 1:
            total = total + _contract(d[:n][::-1], Ph)
        return total
    raise ValueError("target must be 'full' or 'half'")


def _zeta_from(noise, n_steps, dim):
    if noise is None:
        return np.zeros((n_steps + 1, dim))
    values = noise.values if hasattr(noise, "values") else np.asarray(noise, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] < n_steps + 1:
        raise ValueError("noise grid shorter than the step grid")
    if values.shape[1] == 1 and dim > 1:
        values = np.repeat(values, dim, axis=1)
    if values.shape[1] != dim:
        raise ValueError("noise dimension does not match the state dimension")
    return values


def gle_run(grad_potential, kernel, noise, x0, p0, dt, n_steps, m,
            rule="midpoint", meta=None):
    """Integrate the memory dynamics; deterministic given the noise path.

    kernel may be a MemoryKernel, a prebuilt DampingTable, or None (no
    damping: with zero noise the scheme is exactly velocity Verlet).  The
    noise is consumed at the full-step times only.
    """
    X = np.array(x0, dtype=float).copy()
    P = np.array(p0, dtype=float).copy()
    if X.ndim != 1 or X.shape != P.shape:
        raise ValueError("x0 and p0 must be matching vectors")
    dim = X.shape[0]
    zeta = _zeta_from(noise, n_steps, dim)

    if kernel is None:
        table = None
    elif isinstance(kernel, DampingTable):
        if kernel.n_steps < n_steps or kernel.dt != dt or kernel.m != m:
            raise ValueError("damping table grid does not match the run grid")
        table = kernel
    else:
        table = DampingTable.from_kernel(kernel, dt, n_steps, m)
    if rule not in ("midpoint", "printed"):
        raise ValueError("rule must be 'midpoint' or 'printed'")

    t = dt * np.arange(n_steps + 1)
    Xs = np.empty((n_steps + 1, dim))
    Ps = np.empty_like(Xs)
    Xs[0], Ps[0] = X, P

    Pf = np.empty((n_steps + 1, dim))
    Ph = np.empty((n_steps, dim))
    Pf[0] = P
    damp_next = np.zeros(dim)       # midpoint rule: damping at target t_n

    for n in range(n_steps):
        if table is None:
            d_first = 0.0
        elif rule == "midpoint":
            d_first = damp_next
        else:
            state = GleState(n, Pf[: n + 1], Ph[:n])
            d_first = damping_convolution(state, table, target="half")
        P_half = P - 0.5 * dt * (grad_potential(X) - zeta[n] + d_first)
        Ph[n] = P_half
        X = X + dt * P_half

        if table is None:
            d_second = 0.0
        elif rule == "midpoint":
            w = table.full[: n + 1][::-1]
            d_second = _contract(w, Ph[: n + 1])
            damp_next = d_second
        else:
            state = GleState(n, Pf[: n + 1], Ph[: n + 1])
            d_second = damping_convolution(state, table, target="full")
        P = P_half - 0.5 * dt * (grad_potential(X) - zeta[n + 1] + d_second)
        Pf[n + 1] = P
        Xs[n + 1], Ps[n + 1] = X, P

    info = {"scheme": f"gle-{rule}", "dt": dt, "m": m, "n_steps": n_steps}
    if meta:
        info.update(meta)
    return Trajectory(t, Xs, Ps, info)


def gle_run_ensemble_scalar(damping, zeta, x0, p0, dt, n_steps, m,
                            grad_potential=None, rule="midpoint"):
    """Vectorized reduced dynamics: M paths advance in lockstep.

    damping: DampingTable with scalar weights (or None); zeta: (n_steps+1, M)
    noise matrix; x0, p0: (M,) initial values.  Returns (X, P) arrays of
    shape (n_steps+1, M).  Default potential is the unit harmonic well.
    """
    grad = grad_potential or (lambda x: x)
    X = np.array(x0, dtype=float).copy()
    P = np.array(p0, dtype=float).copy()
    n_paths = X.shape[0]
    if zeta is None:
        zeta = np.zeros((n_steps + 1, n_paths))
    if zeta.shape[0] < n_steps + 1 or zeta.shape[1] != n_paths:
        raise ValueError("noise matrix must be (n_steps+1, n_paths)")
    if damping is not None and (
        damping.n_steps < n_steps or damping.dt != dt or damping.m != m
    ):
        raise ValueError("damping table grid does not match the run grid")

    Xs = np.empty((n_steps + 1, n_paths))
    Ps = np.empty_like(Xs)
    Xs[0], Ps[0] = X, P
    Ph = np.empty((n_steps, n_paths))
    Pf = np.empty((n_steps + 1, n_paths)) if rule == "printed" else None
    if rule == "printed":
        Pf[0] = P
    damp_next = np.zeros(n_paths)

    if damping is not None:
        c_rev = damping.c[::-1].copy()
        d_rev = damping.d[::-1].copy()
        full_rev = damping.full[::-1].copy()
        ntab = damping.c.shape[0]

    for n in range(n_steps):
        if damping is None:
            d_first = 0.0
        elif rule == "midpoint":
            d_first = damp_next
        else:
            d_first = c_rev[ntab - n - 1:] @ Pf[: n + 1]
            if n >= 1:
                d_first += d_rev[ntab - n:] @ Ph[:n]
        P_half = P - 0.5 * dt * (grad(X) - zeta[n] + d_first)
        Ph[n] = P_half
        X = X + dt * P_half

        if damping is None:
            d_second = 0.0
        elif rule == "midpoint":
            d_second = full_rev[ntab - n - 1:] @ Ph[: n + 1]
            damp_next = d_second
        else:
            d_second = d_rev[ntab - n - 1:] @ Pf[: n + 1]
            d_second += c_rev[ntab - n - 1:] @ Ph[: n + 1]
        P = P_half - 0.5 * dt * (grad(X) - zeta[n + 1] + d_second)
        if rule == "printed":
            Pf[n + 1] = P
        Xs[n + 1], Ps[n + 1] = X, P
    return Xs, Ps
