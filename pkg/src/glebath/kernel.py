"""Memory kernels and the limiting friction matrix.

Three evaluation modes for the N x N kernel K(tau):

* FiniteN      -- mode sum over the nbar^3 lattice frequencies,
* LimitQuadrature -- the infinite-lattice integral, done in spherical
  frequency coordinates (shell integral by escalating Gauss-Legendre,
  radial cosine transform by adaptive quadrature),
* AnalyticExample -- the closed form 4 pi sin(tau)/tau per entry for the
  demonstration coupling.

The friction matrix is kappa = s s^T / (4 pi c^3) from the force row sums,
or equivalently 2 pi^2 f(0) from the zero-frequency coupling density.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .lattice import (
    BetaFunction,
    ExampleBeta,
    ForceTable,
    beta_on_lattice,
    lattice_frequencies,
)
from .sineint import si

__all__ = [
    "MemoryKernel",
    "FrictionMatrix",
    "KernelQuadratureError",
    "finite_kernel",
    "kernel_finite",
    "limit_kernel",
    "example_kernel",
    "kernel_limit",
    "friction_from_forces",
    "friction_from_beta",
    "kernel_decay_diagnostic",
]


class KernelQuadratureError(RuntimeError):
    """Raised when the limit-kernel quadrature cannot meet its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


def _symmetrize(mat):
    return 0.5 * (mat + np.swapaxes(mat, -1, -2))


@dataclass(frozen=True)
class MemoryKernel:
    """Evaluable kernel: call with scalar or array tau, get (..., N, N)."""

    dim: int
    mode: str                       # "FiniteN" | "LimitQuadrature" | "AnalyticExample"
    _eval: callable
    _antideriv: callable = None

    def __call__(self, tau):
        tau_arr = np.asarray(tau, dtype=float)
        if np.any(tau_arr < 0):
            raise ValueError("kernel requires tau >= 0")
        out = _symmetrize(self._eval(tau_arr))
        return out

    def antiderivative(self, x):
        """Entrywise int_0^x K(tau) dtau, exact for FiniteN and the example."""
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr < 0):
            raise ValueError("antiderivative requires x >= 0")
        if self._antideriv is None:
            raise NotImplementedError(f"no antiderivative for mode {self.mode}")
        return _symmetrize(self._antideriv(x_arr))

    def entry(self, i, j):
        """Scalar function tau -> K_ij(tau)."""
        return lambda tau: self(tau)[..., i, j]


# ---------------------------------------------------------------------------
# finite-n kernel


def finite_kernel(spec, coupling):
    """Mode-sum kernel K_n(tau) = sum_k cos(tau omega_k) beta*beta/(omega_k^2 nbar^3)."""
    spectrum = lattice_frequencies(spec)
    beta = beta_on_lattice(spec, coupling, spectrum)
    om = spectrum.omega
    # weight matrix W_k = Re(beta_k^* beta_k^T) / (omega_k^2 nbar^3), (n, N, N)
    w = np.real(np.einsum("ki,kj->kij", beta.conj(), beta)) / (
        spectrum.omega2[:, None, None] * spec.nbar**3
    )
    nonzero = np.any(w != 0.0, axis=(1, 2))
    om = om[nonzero]
    w = w[nonzero]
    dim = beta.shape[1]

    def evaluate(tau):
        cos = np.cos(np.multiply.outer(tau, om))
        return np.einsum("...k,kij->...ij", cos, w)

    def antiderivative(x):
        s = np.sin(np.multiply.outer(x, om)) / om
        return np.einsum("...k,kij->...ij", s, w)

    return MemoryKernel(dim, "FiniteN", evaluate, antiderivative)


def kernel_finite(spec, coupling, tau):
    """One-shot finite-n kernel evaluation."""
    return finite_kernel(spec, coupling)(tau)


# ---------------------------------------------------------------------------
# infinite-lattice kernel


def _density_factor(omega, c):
    # prod_i 1/(pi sqrt(4c^2 - omega_i^2)); only ever evaluated on |omega_i| <= c
    return np.prod(1.0 / (np.pi * np.sqrt(4.0 * c * c - omega**2)), axis=-1)


def _shell_matrix(coupling, c, omega, order):
    """Angular integral of f(omega nhat, l, l') over the unit sphere, (N, N).

    Gauss-Legendre in u = cos(theta) and in the azimuth; integrand is smooth
    because the coupling support keeps |omega_i| <= c away from the 2c
    density singularity.
    """
    xu, wu = np.polynomial.legendre.leggauss(order)
    xa, wa = np.polynomial.legendre.leggauss(order)
    alpha = np.pi * (xa + 1.0)
    w_alpha = wa * np.pi
    s = np.sqrt(1.0 - xu**2)
    nhat = np.stack(
        [
            np.multiply.outer(s, np.cos(alpha)),
            np.multiply.outer(s, np.sin(alpha)),
            np.broadcast_to(xu[:, None], (order, order)),
        ],
        axis=-1,
    )
    pts = omega * nhat
    beta = coupling(pts)                       # (order, order, N)
    dens = _density_factor(pts, c)             # (order, order)
    f = np.einsum("uai,uaj->uaij", beta, beta) * dens[..., None, None]
    return np.einsum("u,a,uaij->ij", wu, w_alpha, f)


class _ShellTable:
    """Shell integral with automatic order escalation, then frozen order."""

    def __init__(self, coupling, c, tol):
        self.coupling = coupling
        self.c = c
        self.tol = tol
        self.order = None
        self.residual = None

    def calibrate(self):
        # escalate until two successive orders agree well below tol
        probes = self.c * np.array([0.15, 0.45, 0.75, 0.95])
        orders = (16, 24, 32, 48, 64, 96)
        prev = None
        for order in orders:
            vals = np.stack([_shell_matrix(self.coupling, self.c, w, order) for w in probes])
            if prev is not None:
                self.residual = float(np.max(np.abs(vals - prev)))
                if self.residual < 0.1 * self.tol:
                    self.order = order
                    return
            prev = vals
        raise KernelQuadratureError("shell quadrature did not converge", self.residual)

    def __call__(self, omega):
        if self.order is None:
            self.calibrate()
        return _shell_matrix(self.coupling, self.c, omega, self.order)


def limit_kernel(coupling, c=None, tol=1e-8):
    """Infinite-lattice kernel; ExampleBeta short-circuits to the closed form.

    Call quadrature_kernel directly when the integral route is wanted for
    the example coupling (the consistency checks do exactly that).
    """
    if isinstance(coupling, ExampleBeta):
        return example_kernel()
    return quadrature_kernel(coupling, c=c, tol=tol)


def quadrature_kernel(coupling, c=None, tol=1e-8):
    """Spherical-coordinate quadrature route, valid for any BetaFunction."""
    if not isinstance(coupling, BetaFunction):
        raise TypeError("limit kernel needs a BetaFunction (or ExampleBeta) coupling")
    if c is None:
        c = coupling.c
    dim = coupling.n_coords
    shell = _ShellTable(coupling, c, tol)

    def evaluate_scalar(tau):
        out = np.empty((dim, dim))
        worst = 0.0
        for i in range(dim):
            for j in range(i, dim):
                val, err = quad(
                    lambda w, i=i, j=j: shell(w)[i, j],
                    0.0,
                    c,
                    weight="cos",
                    wvar=tau,
                    epsabs=0.1 * tol,
                    limit=400,
                )
                worst = max(worst, err)
                out[i, j] = out[j, i] = val
        if worst > tol:
            raise KernelQuadratureError("radial quadrature tolerance not met", worst)
        return out

    def evaluate(tau):
        if tau.ndim == 0:
            return evaluate_scalar(float(tau))
        flat = [evaluate_scalar(float(t)) for t in tau.ravel()]
        return np.asarray(flat).reshape(tau.shape + (dim, dim))

    def antiderivative_scalar(x):
        # int_0^x K = int g(w) sin(x w)/w dw entrywise; sin(xw)/w stays bounded
        out = np.empty((dim, dim))
        worst = 0.0
        for i in range(dim):
            for j in range(i, dim):
                def igd(w, i=i, j=j):
                    return shell(w)[i, j] * x * np.sinc(x * w / np.pi)
                val, err = quad(igd, 0.0, c, epsabs=0.1 * tol, limit=400)
                worst = max(worst, err)
                out[i, j] = out[j, i] = val
        if worst > tol:
            raise KernelQuadratureError("antiderivative quadrature tolerance not met", worst)
        return out

    def antiderivative(x):
        if x.ndim == 0:
            return antiderivative_scalar(float(x))
        flat = [antiderivative_scalar(float(v)) for v in x.ravel()]
        return np.asarray(flat).reshape(x.shape + (dim, dim))

    return MemoryKernel(dim, "LimitQuadrature", evaluate, antiderivative)


def example_kernel():
    """Closed form for the demonstration coupling: every entry 4 pi sin(tau)/tau."""
    ones = np.ones((3, 3))

    def evaluate(tau):
        val = 4.0 * np.pi * np.sinc(tau / np.pi)
        return np.multiply.outer(val, ones)

    def antiderivative(x):
        return np.multiply.outer(4.0 * np.pi * si(x), ones)

    return MemoryKernel(3, "AnalyticExample", evaluate, antiderivative)


def kernel_limit(coupling, c, tau, tol=1e-8):
    """One-shot limiting-kernel evaluation (closed form for ExampleBeta)."""
    return limit_kernel(coupling, c=c, tol=tol)(tau)


# ---------------------------------------------------------------------------
# friction


@dataclass(frozen=True)
class FrictionMatrix:
    kappa: np.ndarray
    provenance: str      # "from-forces" | "from-beta" | "user"

    def __post_init__(self):
        kappa = np.asarray(self.kappa, dtype=float)
        if kappa.ndim != 2 or kappa.shape[0] != kappa.shape[1]:
            raise ValueError("kappa must be square")
        if not np.allclose(kappa, kappa.T, atol=1e-12 * max(1.0, np.abs(kappa).max())):
            raise ValueError("kappa must be symmetric")
        object.__setattr__(self, "kappa", 0.5 * (kappa + kappa.T))

    @property
    def dim(self):
        return self.kappa.shape[0]


def friction_from_forces(forces, c):
    """kappa = s s^T / (4 pi c^3) with s_ell the force-table row sums."""
    if c <= 0:
        raise ValueError("c must be positive")
    s = forces.row_sums()
    kappa = np.outer(s, s) / (4.0 * np.pi * c**3)
    return FrictionMatrix(kappa, "from-forces")


def friction_from_beta(coupling, c):
    """kappa_{ll'} = 2 pi^2 beta_l(0) beta_l'(0) (2 c pi)^(-3)."""
    if c <= 0:
        raise ValueError("c must be positive")
    if isinstance(coupling, ForceTable):
        beta0 = coupling.beta_at_r(np.zeros(3)).real
    elif isinstance(coupling, BetaFunction):
        beta0 = np.asarray(coupling(np.zeros(3)), dtype=float)
    else:
        raise TypeError(f"unsupported coupling type {type(coupling)!r}")
    if not np.all(np.isfinite(beta0)):
        raise ValueError("beta undefined at omega = 0")
    f0 = np.outer(beta0, beta0) / (2.0 * c * np.pi) ** 3
    return FrictionMatrix(2.0 * np.pi**2 * f0, "from-beta")


# ---------------------------------------------------------------------------
# decay diagnostic


def kernel_decay_diagnostic(kern, tau_max, n_samples=4000):
    """Least-squares slope of log ||K|| against log tau over the envelope of
    local maxima on [1, tau_max].  Reported, never asserted: the example
    coupling decays only like 1/tau because its beta jumps."""
    taus = np.linspace(1.0, float(tau_max), n_samples)
    vals = kern(taus)
    norms = np.linalg.norm(vals, axis=(-2, -1))
    if np.max(norms) <= 0.0:
        return float("nan")
    interior = (norms[1:-1] >= norms[:-2]) & (norms[1:-1] >= norms[2:])
    peaks = np.where(interior)[0] + 1
    peaks = peaks[norms[peaks] > 1e-300]
    if len(peaks) < 3:
        return float("nan")
    slope, _ = np.polyfit(np.log(taus[peaks]), np.log(norms[peaks]), 1)
    return float(slope)
