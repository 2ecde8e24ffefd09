import numpy as np
import pytest

from glebath.sineint import si, X_SWITCH

from conftest import si_quadrature_oracle


def test_si_zero():
    assert si(0.0) == 0.0


def test_si_rejects_negative():
    with pytest.raises(ValueError):
        si(-0.5)
    with pytest.raises(ValueError):
        si(np.array([1.0, -2.0]))


def test_si_large_argument_approaches_half_pi():
    assert abs(si(1e6) - np.pi / 2) < 1e-4


def test_si_monotone_on_first_arch():
    xs = np.linspace(0.0, np.pi, 200)
    vals = si(xs)
    assert np.all(np.diff(vals) > 0)


def test_si_against_quadrature_oracle_selected_points():
    for x in (1.0, np.pi, 10.0):
        assert abs(si(x) - si_quadrature_oracle(x)) < 1e-10


def test_si_against_oracle_log_spaced():
    xs = np.logspace(-3, 3, 50)
    errs = [abs(si(float(x)) - si_quadrature_oracle(x)) for x in xs]
    assert max(errs) < 1e-10


def test_si_branches_agree_at_seam():
    from glebath.sineint import _si_cf, _si_series

    for x in (X_SWITCH - 0.5, X_SWITCH, X_SWITCH + 1e-9, X_SWITCH + 0.5):
        series = _si_series(x)
        cf = _si_cf(x)
        assert abs(series - cf) < 1e-10
        assert abs(si(x) - si_quadrature_oracle(x)) < 1e-10


def test_si_vectorized_matches_scalar():
    xs = np.array([0.0, 0.3, 2.0, 17.5, 120.0])
    vec = si(xs)
    for x, v in zip(xs, vec):
        assert v == si(float(x))
