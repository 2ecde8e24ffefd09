"""Periodic cubic lattice bath: mode frequencies and couplings.

The bath is a nearest-neighbour harmonic lattice on the periodic index set
{-nbar/2, ..., nbar/2 - 1}^3 with stiffness c and a small regulariser eta
that keeps the potential strictly convex at finite size.  Mode k has

    omega_k^2 = c^2 * sum_i 2 (1 - cos(2 pi k_i / nbar)) + eta^2 .

Couplings enter only through the Fourier coefficients beta_{ell,k} of the
force-derivative rows, or directly as a function beta_ell(omega) on the
frequency cube [-2c, 2c]^3.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticeBathSpec",
    "BathSpectrum",
    "lattice_frequencies",
    "ForceTable",
    "BetaFunction",
    "ExampleBeta",
    "omega_from_r",
    "beta_on_lattice",
    "RealModeBasis",
    "real_mode_basis",
]


@dataclass(frozen=True)
class LatticeBathSpec:
    """Finite lattice bath: side nbar (nbar^3 modes), stiffness c,
    regulariser eta (default 1/nbar), bath/system mass ratio m."""

    nbar: int
    c: float = 1.0
    eta: float | None = None
    m: float = 1.0

    def __post_init__(self):
        if self.nbar < 2 or self.nbar % 2 != 0:
            raise ValueError(f"nbar must be even and >= 2, got {self.nbar}")
        if self.c <= 0:
            raise ValueError("stiffness c must be positive")
        if self.m <= 0:
            raise ValueError("mass ratio m must be positive")
        if self.eta is None:
            object.__setattr__(self, "eta", 1.0 / self.nbar)
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")

    @property
    def n_modes(self):
        return self.nbar**3


@dataclass(frozen=True)
class BathSpectrum:
    """All lattice modes in a fixed (lexicographic) order."""

    nbar: int
    c: float
    eta: float
    k: np.ndarray         # (n, 3) integer triples
    omega2: np.ndarray    # (n,)

    @property
    def omega(self):
        return np.sqrt(self.omega2)


def lattice_frequencies(spec):
    """Mode table of the lattice bath, deterministic lexicographic order.

    omega_k^2 = c^2 sum_i 2(1 - cos(2 pi k_i / nbar)) + eta^2.
    """
    if spec.eta == 0:
        raise ValueError("finite-size runs need eta > 0 (strict convexity)")
    idx = np.arange(-spec.nbar // 2, spec.nbar // 2)
    g1, g2, g3 = np.meshgrid(idx, idx, idx, indexing="ij")
    k = np.stack([g1, g2, g3], axis=-1).reshape(-1, 3)
    om2 = spec.c**2 * np.sum(2.0 * (1.0 - np.cos(2.0 * np.pi * k / spec.nbar)), axis=-1)
    om2 = om2 + spec.eta**2
    return BathSpectrum(spec.nbar, spec.c, spec.eta, k, om2)


def omega_from_r(r, c=1.0):
    """Frequency map omega_i = sqrt(2) c sgn(r_i) sqrt(1 - cos 2 pi r_i)
    taking the reduced wave vector r in [-1/2, 1/2]^3 to the cube [-2c, 2c]^3."""
    r = np.asarray(r, dtype=float)
    return np.sqrt(2.0) * c * np.sign(r) * np.sqrt(1.0 - np.cos(2.0 * np.pi * r))


# ---------------------------------------------------------------------------
# couplings


class ForceTable:
    """Localized force-derivative table F_{ell,j}: finitely many lattice
    sites j (integer triples) per system coordinate ell."""

    def __init__(self, n_coords, entries):
        """entries: iterable of (ell, (j1, j2, j3), value) with 0-based ell."""
        self.n_coords = int(n_coords)
        ells, sites, values = [], [], []
        for ell, j, val in entries:
            if not 0 <= ell < self.n_coords:
                raise ValueError(f"coordinate index {ell} out of range")
            j = tuple(int(x) for x in j)
            if len(j) != 3:
                raise ValueError("lattice sites are integer triples")
            ells.append(int(ell))
            sites.append(j)
            values.append(float(val))
        self.ell = np.asarray(ells, dtype=int)
        self.sites = np.asarray(sites, dtype=int).reshape(-1, 3)
        self.values = np.asarray(values, dtype=float)
        for v in self.values:
            if not np.isfinite(v):
                raise ValueError("force table entries must be finite")

    def row_sums(self):
        """s_ell = sum_j F_{ell,j}; equals beta_ell(0)."""
        s = np.zeros(self.n_coords)
        np.add.at(s, self.ell, self.values)
        return s

    def beta_at_r(self, r):
        """beta_ell(r) = sum_j F_{ell,j} e^{-2 pi i j.r} for r (...,3)."""
        r = np.asarray(r, dtype=float)
        phase = np.exp(-2j * np.pi * np.tensordot(r, self.sites.T, axes=1))
        out = np.zeros(r.shape[:-1] + (self.n_coords,), dtype=complex)
        for ell in range(self.n_coords):
            mask = self.ell == ell
            out[..., ell] = phase[..., mask] @ self.values[mask]
        return out

    @classmethod
    def from_file(cls, path, n_coords=None):
        """Text format: one line per entry 'ell j1 j2 j3 value'; '#' comments."""
        entries = []
        max_ell = -1
        with open(path) as fh:
            for ln, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 5:
                    raise ValueError(f"{path}:{ln}: expected 'ell j1 j2 j3 value'")
                ell = int(parts[0])
                entries.append((ell, (int(parts[1]), int(parts[2]), int(parts[3])),
                                float(parts[4])))
                max_ell = max(max_ell, ell)
        if n_coords is None:
            n_coords = max_ell + 1
        return cls(n_coords, entries)


class BetaFunction:
    """Coupling given directly as beta_ell(omega) on [-2c, 2c]^3.

    func(omega) takes an (..., 3) array of frequency vectors and returns an
    (..., n_coords) array.  Unless support_exempt is set, beta must vanish
    for |omega| > c; evaluations outside that ball are masked to zero.
    """

    def __init__(self, n_coords, func, c=1.0, support_exempt=False):
        self.n_coords = int(n_coords)
        self.func = func
        self.c = float(c)
        self.support_exempt = bool(support_exempt)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        vals = np.asarray(self.func(omega), dtype=float)
        if vals.shape != omega.shape[:-1] + (self.n_coords,):
            raise ValueError("beta function returned wrong shape")
        if not self.support_exempt:
            inside = np.sum(omega**2, axis=-1) <= self.c**2 * (1.0 + 1e-12)
            vals = np.where(inside[..., None], vals, 0.0)
        return vals


class ExampleBeta(BetaFunction):
    """The jump-discontinuous demonstration coupling for c = 1:

        beta_ell(omega) = 1_{|omega| <= 1} prod_i pi^(1/2) (4 - omega_i^2)^(1/4)

    identical for all three system coordinates, so that
    beta* beta times the mode density is exactly the unit-ball indicator.
    """

    def __init__(self):
        super().__init__(3, self._eval, c=1.0, support_exempt=True)

    @staticmethod
    def _eval(omega):
        omega = np.asarray(omega, dtype=float)
        inside = np.sum(omega**2, axis=-1) <= 1.0
        base = np.clip(4.0 - omega**2, 0.0, None)
        val = np.prod(np.pi**0.5 * base**0.25, axis=-1)
        val = np.where(inside, val, 0.0)
        return np.repeat(val[..., None], 3, axis=-1)


def beta_on_lattice(spec, coupling, spectrum=None):
    """beta_{ell,k} for every lattice mode, shape (n_modes, N), complex.

    ForceTable couplings use the discrete transform sum_j F e^{-2 pi i k.j/nbar};
    function couplings are evaluated at omega(k/nbar).
    """
    if spectrum is None:
        spectrum = lattice_frequencies(spec)
    r = spectrum.k / spec.nbar
    if isinstance(coupling, ForceTable):
        return coupling.beta_at_r(r)
    if isinstance(coupling, BetaFunction):
        return coupling(omega_from_r(r, spec.c)).astype(complex)
    raise TypeError(f"unsupported coupling type {type(coupling)!r}")


# ---------------------------------------------------------------------------
# real eigenbasis


@dataclass(frozen=True)
class RealModeBasis:
    """Bath modes in a real orthonormal eigenbasis of the lattice Hessian.

    Conjugate Fourier pairs {k, -k} are folded into one cosine and one sine
    mode; self-conjugate modes (all k_i in {0, -nbar/2}) appear once.  The
    coupling matrix b[kappa, ell] = <e_kappa, F'_ell> carries everything the
    dynamics needs: the finite kernel is sum_kappa cos(tau omega) b b^T/omega^2.
    """

    spec: LatticeBathSpec
    omega: np.ndarray     # (n,)
    b: np.ndarray         # (n, N) real
    labels: np.ndarray = field(repr=False, default=None)  # (n, 4): k triple + {0 self,1 cos,2 sin}

    @property
    def n_modes(self):
        return self.omega.shape[0]

    @property
    def n_coords(self):
        return self.b.shape[1]


def real_mode_basis(spec, coupling):
    """Fold the complex Fourier modes into the real eigenbasis."""
    spectrum = lattice_frequencies(spec)
    beta = beta_on_lattice(spec, coupling, spectrum)
    nbar = spec.nbar
    k = spectrum.k
    om = spectrum.omega
    n32 = nbar**1.5

    half = nbar // 2
    selfconj = np.all((k == 0) | (k == -half), axis=1)
    # canonical representative of each {k,-k} pair: lexicographically smaller
    neg = ((-k + half) % nbar) - half
    order_self = np.einsum("ki,i->k", k + half, np.array([nbar**2, nbar, 1]))
    order_neg = np.einsum("ki,i->k", neg + half, np.array([nbar**2, nbar, 1]))
    rep = ~selfconj & (order_self < order_neg)

    omegas = [om[selfconj], om[rep], om[rep]]
    bs = [
        beta[selfconj].real / n32,
        np.sqrt(2.0) * beta[rep].real / n32,
        -np.sqrt(2.0) * beta[rep].imag / n32,
    ]
    kinds = [
        np.zeros(selfconj.sum(), dtype=int),
        np.ones(rep.sum(), dtype=int),
        np.full(rep.sum(), 2, dtype=int),
    ]
    klabels = [k[selfconj], k[rep], k[rep]]

    omega = np.concatenate(omegas)
    b = np.concatenate(bs, axis=0)
    labels = np.concatenate(
        [np.column_stack([kk, kind]) for kk, kind in zip(klabels, kinds)], axis=0
    )
    if omega.shape[0] != spec.n_modes:
        raise AssertionError("mode folding lost modes")  # pragma: no cover
    return RealModeBasis(spec, omega, b, labels)
