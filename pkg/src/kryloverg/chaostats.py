"""Spectral chaos diagnostics: gap-ratio statistic and eigenvector statistics.

The mean adjacent-gap ratio distinguishes uncorrelated (Poisson) spectra
from orthogonal-ensemble spectra without unfolding; the eigenvector measure
compares pooled squared overlaps against the orthogonal-ensemble component
distribution through a Kolmogorov-Smirnov statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.special

from .errors import (
    DegenerateSpectrum,
    NonUnitaryBasis,
    OutOfRange,
    ShapeMismatch,
    TooFewLevels,
)

# reference values of the mean gap ratio for uncorrelated and
# orthogonal-ensemble spectra
R_MEAN_POISSON = 0.38629
R_MEAN_GOE = 0.53590

DEGENERACY_RTOL = 1e-12
BASIS_UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class GapRatioResult:
    """Mean adjacent-gap ratio and its affine normalization eta."""

    r_mean: float
    eta: float
    n_gaps: int
    n_dropped: int = 0


@dataclass(frozen=True)
class EigenvectorStatsResult:
    delta_ks: float
    n_coefficients: int
    reference_basis_id: str


def ks_sup_distance(sorted_values: np.ndarray, model_cdf: np.ndarray) -> float:
    """Two-sided sup distance between an empirical CDF and a model CDF.

    ``model_cdf`` holds the model CDF evaluated at ``sorted_values``.  The
    supremum of |eCDF - CDF| is attained at a jump of the step function, so
    both one-sided deviations are evaluated at every sample point.
    """
    n = sorted_values.size
    steps = np.arange(1, n + 1, dtype=float) / n
    d_plus = float(np.max(steps - model_cdf))
    d_minus = float(np.max(model_cdf - (steps - 1.0 / n)))
    return max(d_plus, d_minus)


def r_ratio_mean(levels, degeneracy_rtol: float = DEGENERACY_RTOL) -> GapRatioResult:
    """Mean ratio of consecutive level spacings min(s_n, s_{n-1})/max(s_n, s_{n-1}).

    Levels separated by less than ``degeneracy_rtol`` times the spectral range
    are treated as exact degeneracies: the duplicate is dropped and counted.
    eta is the affine map sending the Poisson value to 0 and the
    orthogonal-ensemble value to 1; it is deliberately not clamped.
    """
    lv = np.sort(np.asarray(levels, dtype=float).ravel())
    if lv.size < 3:
        raise TooFewLevels(f"need at least 3 levels, got {lv.size}")
    span = float(lv[-1] - lv[0])
    if span <= 0.0:
        raise DegenerateSpectrum("all levels identical")
    thresh = degeneracy_rtol * span

    gaps = np.diff(lv)
    keep = np.concatenate(([True], gaps >= thresh))
    n_dropped = int(lv.size - np.count_nonzero(keep))
    lv = lv[keep]
    if lv.size < 3:
        raise TooFewLevels(f"only {lv.size} distinct levels after degeneracy filtering")

    s = np.diff(lv)
    if np.any(s < thresh):
        raise DegenerateSpectrum("spacing below degeneracy threshold after filtering")
    ratios = np.minimum(s[1:], s[:-1]) / np.maximum(s[1:], s[:-1])
    r_mean = float(np.mean(ratios))
    eta = (r_mean - R_MEAN_POISSON) / (R_MEAN_GOE - R_MEAN_POISSON)
    return GapRatioResult(r_mean=r_mean, eta=eta, n_gaps=int(ratios.size), n_dropped=n_dropped)


def goe_component_cdf(x, dim: int):
    """CDF of squared eigenvector components for the orthogonal ensemble.

    The component density is Beta(1/2, (dim-1)/2), so the CDF is the
    regularized incomplete beta function with those parameters.  Accepts a
    scalar or an array; values must lie in [0, 1].
    """
    if dim < 3:
        raise OutOfRange(f"dimension must be >= 3, got {dim}")
    arr = np.asarray(x, dtype=float)
    if arr.size and (np.min(arr) < 0.0 or np.max(arr) > 1.0):
        raise OutOfRange("components must lie in [0, 1]")
    cdf = scipy.special.betainc(0.5, (dim - 1) / 2.0, arr)
    if np.isscalar(x):
        return float(cdf)
    return cdf


def _check_unitary(m: np.ndarray, name: str, tol: float) -> None:
    gram = m.conj().T @ m
    if float(np.max(np.abs(gram - np.eye(m.shape[0])))) > tol:
        raise NonUnitaryBasis(f"{name} is not unitary within {tol:.1e}")


def delta_ks(
    eigvecs,
    ref_basis,
    reference_basis_id: str = "custom",
    unitarity_tol: float = BASIS_UNITARITY_TOL,
) -> EigenvectorStatsResult:
    """Eigenvector chaoticity: 1 minus the KS distance of pooled overlaps.

    All squared overlaps |<phi_j|psi_i>|^2 between eigenvector columns and
    reference-basis columns are pooled into one empirical CDF and compared
    against the orthogonal-ensemble component CDF.  Near 1 for chaotic
    systems, lower for localized ones.
    """
    psi = np.asarray(eigvecs, dtype=complex)
    phi = np.asarray(ref_basis, dtype=complex)
    if psi.shape != phi.shape or psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
        raise ShapeMismatch(f"expected matching square matrices, got {psi.shape} vs {phi.shape}")
    dim = psi.shape[0]
    _check_unitary(psi, "eigenvector matrix", unitarity_tol)
    _check_unitary(phi, "reference basis", unitarity_tol)

    coeffs = np.abs(phi.conj().T @ psi) ** 2
    row_sums = coeffs.sum(axis=0)
    if float(np.max(np.abs(row_sums - 1.0))) > 1e-10:
        raise NonUnitaryBasis("pooled overlaps do not normalize per eigenvector")

    pooled = np.sort(coeffs.ravel())
    sup = ks_sup_distance(pooled, goe_component_cdf(pooled, dim))
    return EigenvectorStatsResult(
        delta_ks=1.0 - sup,
        n_coefficients=int(pooled.size),
        reference_basis_id=reference_basis_id,
    )
