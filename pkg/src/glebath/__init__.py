"""Particle dynamics coupled to a lattice heat bath, its memory-kernel
reduction, and the pure Langevin limit with the rank-one friction matrix."""

from .analysis import (
    AutocorrCurve,
    Histogram,
    autocorr_ensemble,
    chi2_normal_gof,
    curve_distance,
    histogram,
    weak_error,
)
from .bath import (
    BathTrajectory,
    GibbsBathSample,
    bath_energy,
    bath_run,
    mode_energies,
    sample_bath_initial,
)
from .gle import (
    DampingTable,
    GleState,
    SineIntegralTable,
    damping_convolution,
    gle_run,
    gle_run_ensemble_scalar,
    reduced_example_damping,
)
from .kernel import (
    FrictionMatrix,
    KernelQuadratureError,
    MemoryKernel,
    example_kernel,
    finite_kernel,
    friction_from_beta,
    friction_from_forces,
    kernel_decay_diagnostic,
    kernel_finite,
    kernel_limit,
    limit_kernel,
    quadrature_kernel,
)
from .langevin import (
    LangevinConfig,
    OuStepOperator,
    build_ou_operator,
    langevin_run,
    langevin_run_ensemble,
    reduced_1d_preset,
)
from .lattice import (
    BathSpectrum,
    BetaFunction,
    ExampleBeta,
    ForceTable,
    LatticeBathSpec,
    RealModeBasis,
    beta_on_lattice,
    lattice_frequencies,
    omega_from_r,
    real_mode_basis,
)
from .noise import (
    CovarianceFactor,
    NoisePath,
    noise_covariance,
    sample_noise_ensemble,
    sample_noise_path,
    spectral_noise_finite,
    sqrt_psd,
    toeplitz_covariance,
)
from .seeding import derive_rng, derive_seed_sequence
from .sineint import si
from .surfaces import (
    Surface,
    SurfaceWeights,
    mixed_observable,
    sample_gibbs_positions,
    surface_weights,
)
from .trajectories import Trajectory

__version__ = "0.1.0"
