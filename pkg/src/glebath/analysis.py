"""Ensemble statistics: histograms, autocorrelations, comparison metrics."""

from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = [
    "Histogram",
    "histogram",
    "chi2_normal_gof",
    "AutocorrCurve",
    "autocorr_ensemble",
    "curve_distance",
    "weak_error",
    "moment_with_stderr",
]


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def n_samples(self):
        return int(self.counts.sum())

    @property
    def centers(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def density(self):
        widths = np.diff(self.edges)
        return self.counts / (self.counts.sum() * widths)


def histogram(values, bins="fd", range_=None):
    """Counts over Freedman-Diaconis bins by default; fixed edges accepted
    for bit-reproducible regeneration."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("empty ensemble")
    counts, edges = np.histogram(values, bins=bins, range=range_)
    return Histogram(edges, counts)


def chi2_normal_gof(values, n_bins=24, mean=0.0, std=1.0):
    """Chi-squared goodness of fit against N(mean, std^2) with equiprobable
    bins and fully specified parameters (dof = n_bins - 1).

    Returns (statistic, p_value).
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size < 5 * n_bins:
        raise ValueError("too few samples for the requested bin count")
    quantiles = stats.norm.ppf(np.linspace(0.0, 1.0, n_bins + 1), loc=mean, scale=std)
    counts, _ = np.histogram(values, bins=quantiles)
    expected = values.size / n_bins
    stat = float(np.sum((counts - expected) ** 2) / expected)
    pvalue = float(stats.chi2.sf(stat, df=n_bins - 1))
    return stat, pvalue


@dataclass(frozen=True)
class AutocorrCurve:
    t: np.ndarray
    value: np.ndarray
    stderr: np.ndarray
    t_ref: float

    def __post_init__(self):
        if not (self.t.shape == self.value.shape == self.stderr.shape):
            raise ValueError("curve arrays must share a grid")


def autocorr_ensemble(paths, t, t_ref):
    """Ensemble autocorrelation A(t) = mean over paths of Y(t) Y(t_ref).

    paths: (n_paths, n_times) samples of one component on a shared grid; the
    reference time must lie on the grid.  Standard errors are the pathwise
    spread of the products (paths are independent).
    """
    paths = np.asarray(paths, dtype=float)
    t = np.asarray(t, dtype=float)
    if paths.ndim != 2 or paths.shape[1] != t.shape[0]:
        raise ValueError("paths must be (n_paths, n_times) on the given grid")
    i_ref = int(np.argmin(np.abs(t - t_ref)))
    if abs(t[i_ref] - t_ref) > 1e-9 * max(1.0, abs(t_ref)):
        raise ValueError("t_ref must lie on the time grid")
    ref = paths[:, i_ref][:, None]
    prod = paths * ref
    value = prod.mean(axis=0)
    stderr = prod.std(axis=0, ddof=1) / np.sqrt(paths.shape[0])
    return AutocorrCurve(t, value, stderr, float(t[i_ref]))


def _trapezoid_weights(t):
    w = np.empty_like(t)
    w[0] = 0.5 * (t[1] - t[0])
    w[-1] = 0.5 * (t[-1] - t[-2])
    w[1:-1] = 0.5 * (t[2:] - t[:-2])
    return w / w.sum()


def curve_distance(curve_a, curve_b, weight=None):
    """Discrete L2 distance between curves on a shared grid.

    Normalized so a constant offset epsilon gives distance epsilon.  When
    the curves carry standard errors a delta-method stderr of the distance
    is returned as well: (distance, stderr).
    """
    ta = curve_a.t if isinstance(curve_a, AutocorrCurve) else np.asarray(curve_a[0])
    va = curve_a.value if isinstance(curve_a, AutocorrCurve) else np.asarray(curve_a[1])
    tb = curve_b.t if isinstance(curve_b, AutocorrCurve) else np.asarray(curve_b[0])
    vb = curve_b.value if isinstance(curve_b, AutocorrCurve) else np.asarray(curve_b[1])
    if ta.shape != tb.shape or np.any(np.abs(ta - tb) > 1e-12 * max(1.0, np.abs(ta).max())):
        raise ValueError("curves must share a time grid")
    w = _trapezoid_weights(ta) if weight is None else np.asarray(weight) / np.sum(weight)
    delta = va - vb
    dist = float(np.sqrt(np.sum(w * delta**2)))
    sa = curve_a.stderr if isinstance(curve_a, AutocorrCurve) else None
    sb = curve_b.stderr if isinstance(curve_b, AutocorrCurve) else None
    if sa is None and sb is None:
        return dist, 0.0
    var_pt = (sa**2 if sa is not None else 0.0) + (sb**2 if sb is not None else 0.0)
    # var(d^2) = sum (2 w delta)^2 var_pt; stderr(d) = stderr(d^2)/(2 d)
    var_d2 = float(np.sum((2.0 * w * delta) ** 2 * var_pt))
    if dist > 0.0:
        return dist, float(np.sqrt(var_d2) / (2.0 * dist))
    return dist, float(np.sqrt(np.sqrt(var_d2)))


def weak_error(ensemble_a, ensemble_b, observable=None):
    """Difference of observable means with the pooled standard error."""
    a = np.asarray(ensemble_a, dtype=float)
    b = np.asarray(ensemble_b, dtype=float)
    if observable is not None:
        a = np.asarray(observable(a), dtype=float)
        b = np.asarray(observable(b), dtype=float)
    diff = a.mean() - b.mean()
    stderr = np.sqrt(a.var(ddof=1) / a.size + b.var(ddof=1) / b.size)
    return float(diff), float(stderr)


def moment_with_stderr(values, power=2):
    """Raw moment estimate with its Monte-Carlo standard error."""
    values = np.asarray(values, dtype=float) ** power
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))
