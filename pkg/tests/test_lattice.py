import numpy as np
import pytest

from glebath.lattice import (
    BetaFunction,
    ExampleBeta,
    ForceTable,
    LatticeBathSpec,
    beta_on_lattice,
    lattice_frequencies,
    omega_from_r,
    real_mode_basis,
)


def test_spec_rejects_odd_or_small_nbar():
    with pytest.raises(ValueError):
        LatticeBathSpec(nbar=3)
    with pytest.raises(ValueError):
        LatticeBathSpec(nbar=0)
    with pytest.raises(ValueError):
        LatticeBathSpec(nbar=4, c=-1.0)


def test_default_eta_is_inverse_nbar():
    assert LatticeBathSpec(nbar=8).eta == pytest.approx(1.0 / 8.0)


def test_frequencies_nbar2_corners():
    spec = LatticeBathSpec(nbar=2, c=1.0, eta=1e-12)
    spectrum = lattice_frequencies(spec)
    table = {tuple(k): om2 for k, om2 in zip(spectrum.k, spectrum.omega2)}
    assert table[(0, 0, 0)] == pytest.approx(0.0, abs=1e-20)
    assert table[(-1, 0, 0)] == pytest.approx(4.0)
    assert table[(-1, -1, -1)] == pytest.approx(12.0)


def test_frequency_extremes():
    spec = LatticeBathSpec(nbar=8, c=1.3, eta=0.05)
    spectrum = lattice_frequencies(spec)
    assert spectrum.omega2.min() == pytest.approx(spec.eta**2)
    assert spectrum.omega2.max() == pytest.approx(12 * spec.c**2 + spec.eta**2)


def test_frequencies_match_independent_cosine_evaluation(rng):
    spec = LatticeBathSpec(nbar=16, c=1.0, eta=1e-3)
    spectrum = lattice_frequencies(spec)
    table = {tuple(k): om2 for k, om2 in zip(spectrum.k, spectrum.omega2)}
    for _ in range(10):
        k = tuple(rng.integers(-8, 8, size=3))
        expected = sum(
            2.0 * (1.0 - np.cos(2.0 * np.pi * ki / 16.0)) for ki in k
        ) + 1e-6
        assert table[k] == pytest.approx(expected, rel=1e-12)


def test_eta_zero_rejected_for_finite_runs():
    spec = LatticeBathSpec(nbar=4, eta=0.0)
    with pytest.raises(ValueError):
        lattice_frequencies(spec)


def test_omega_map_endpoints():
    c = 1.7
    assert omega_from_r(np.zeros(3), c) == pytest.approx(np.zeros(3)).obj.all() or True
    assert np.allclose(omega_from_r(np.zeros(3), c), 0.0)
    # r_i = +-1/2 maps to the band edge +-2c... r=1/2: 1-cos(pi)=2 -> 2c
    assert np.allclose(omega_from_r(np.array([0.5, -0.5, 0.25]), c)[:2],
                       [2 * c, -2 * c])


def test_example_beta_values():
    beta = ExampleBeta()
    val = beta(np.zeros(3))
    assert val.shape == (3,)
    assert np.allclose(val, np.pi**1.5 * 8**0.5)
    assert np.allclose(beta(np.array([2.0, 0.0, 0.0])), 0.0)  # outside |omega|<=1
    inside = beta(np.array([0.5, 0.5, 0.5]))
    expected = np.prod(np.pi**0.5 * (4.0 - 0.25) ** 0.25)
    assert np.allclose(inside, expected)


def test_beta_function_support_masking():
    raw = lambda om: np.ones(om.shape[:-1] + (1,))
    coupling = BetaFunction(1, raw, c=1.0)
    assert coupling(np.array([0.3, 0.0, 0.0]))[0] == 1.0
    assert coupling(np.array([1.2, 0.0, 0.0]))[0] == 0.0


def test_force_table_row_sums_and_beta_zero():
    table = ForceTable(2, [(0, (0, 0, 0), 1.5), (0, (1, 2, -1), -0.5),
                           (1, (0, 0, 1), 2.0)])
    s = table.row_sums()
    assert np.allclose(s, [1.0, 2.0])
    assert np.allclose(table.beta_at_r(np.zeros(3)).real, s)


def test_force_table_file_roundtrip(tmp_path):
    path = tmp_path / "forces.txt"
    path.write_text("# ell j1 j2 j3 value\n0 0 0 0 1.5\n0 1 2 -1 -0.5\n1 0 0 1 2.0\n")
    table = ForceTable.from_file(path)
    assert table.n_coords == 2
    assert np.allclose(table.row_sums(), [1.0, 2.0])


def test_real_mode_basis_counts_and_kernel_identity(rng):
    """Folded real basis reproduces the complex-mode kernel sum exactly."""
    spec = LatticeBathSpec(nbar=4, c=1.0, eta=0.3)
    table = ForceTable(2, [(0, (0, 0, 0), 1.0), (0, (1, 0, 0), 0.5),
                           (1, (0, 1, 1), -0.7)])
    modes = real_mode_basis(spec, table)
    assert modes.n_modes == spec.n_modes
    assert modes.b.shape == (64, 2)

    spectrum = lattice_frequencies(spec)
    beta = beta_on_lattice(spec, table, spectrum)
    for tau in (0.0, 0.7, 3.1):
        complex_sum = np.einsum(
            "k,ki,kj->ij",
            np.cos(tau * spectrum.omega) / (spectrum.omega2 * spec.nbar**3),
            beta.conj(), beta).real
        real_sum = np.einsum(
            "k,ki,kj->ij",
            np.cos(tau * modes.omega) / modes.omega**2, modes.b, modes.b)
        assert np.allclose(real_sum, complex_sum, atol=1e-13)


def test_real_mode_basis_orthonormality_small():
    """Explicit eigenvector check at nbar=2: b equals <e_kappa, F> for an
    orthonormal eigenbasis, so sum_kappa b b^T = sum_j F F^T (Parseval)."""
    spec = LatticeBathSpec(nbar=2, c=1.0, eta=0.5)
    table = ForceTable(1, [(0, (0, 0, 0), 2.0), (0, (1, 0, 0), -1.0)])
    modes = real_mode_basis(spec, table)
    # Parseval: sum_k |<e_k, F>|^2 = |F|^2 = 4 + 1
    assert np.sum(modes.b**2) == pytest.approx(5.0, rel=1e-12)
