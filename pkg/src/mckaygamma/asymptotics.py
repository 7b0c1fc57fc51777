"""Delta-method asymptotic covariance for the Z-statistic estimators.

The estimator is xi(z_bar) where z_bar collects the nine sample means; by
the delta method sqrt(n) (xi(z_bar) - theta) is asymptotically normal with
covariance A Sigma_Z A^T, where A is the Jacobian of xi and Sigma_Z the
covariance of the per-observation statistics.  Neither has a usable closed
form here, so Sigma_Z is estimated empirically from the observed h-vectors
and A by central finite differences.

Caveat worth knowing: the statistics h5 = x ln x / (y - x) and
h8 = y ln y / (y - x) only have finite variance when beta > 2 (and finite
mean when beta > 1), because 1/(y - x) has gamma-distributed denominator
with shape beta.  Below those thresholds Sigma_Z does not exist and the
plug-in standard errors are themselves noisy; the module computes the
plug-in quantity regardless and leaves existence to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DifferentiationError, DomainError, EstimationError
from .estimators import (
    SummaryZ,
    TransformPairG,
    estimate_from_z,
    h_matrix,
    summarize_z,
)
from .model import BivariateSample

__all__ = [
    "AsymptoticResult",
    "xi",
    "empirical_sigma_z",
    "jacobian_xi",
    "asymptotic_covariance",
]


@dataclass(frozen=True)
class AsymptoticResult:
    """Per-observation covariance (A Sigma_Z A^T) and the implied standard
    errors sqrt(diag / n)."""

    cov: np.ndarray
    se: np.ndarray


def _as_zvec(z):
    if isinstance(z, SummaryZ):
        return z.as_array()
    arr = np.asarray(z, dtype=float)
    if arr.shape != (9,):
        raise DomainError("z must be a 9-vector or a SummaryZ")
    return arr


def xi(z):
    """The map from the nine summary statistics to (alpha, beta, gamma).

    Same code path as the closed-form estimator, so the two agree exactly.
    """
    return np.array(estimate_from_z(_as_zvec(z)))


def empirical_sigma_z(sample: BivariateSample, g: TransformPairG):
    """Sample covariance (denominator n - 1) of the per-observation
    h-vectors."""
    if sample.n < 10:
        raise DomainError("need at least 10 pairs for a usable covariance")
    h = h_matrix(sample, g)
    return np.cov(h, rowvar=False, ddof=1)


def jacobian_xi(z):
    """3 x 9 Jacobian of xi by central differences, step 1e-5 * max(1, |z_k|)."""
    zv = _as_zvec(z)
    jac = np.zeros((3, 9))
    for k in range(9):
        h = 1e-5 * max(1.0, abs(zv[k]))
        zp = zv.copy()
        zm = zv.copy()
        zp[k] += h
        zm[k] -= h
        try:
            jac[:, k] = (xi(zp) - xi(zm)) / (2.0 * h)
        except EstimationError as exc:
            raise DifferentiationError(
                f"perturbed statistics degenerate in coordinate {k + 1}: {exc}"
            ) from exc
    return jac


def asymptotic_covariance(sample: BivariateSample, g: TransformPairG) -> AsymptoticResult:
    """Plug-in delta-method covariance and standard errors at the sample."""
    if sample.n < 10:
        raise DomainError("need at least 10 pairs")
    z = summarize_z(sample, g)
    a = jacobian_xi(z)
    sigma = empirical_sigma_z(sample, g)
    cov = a @ sigma @ a.T
    cov = (cov + cov.T) / 2.0
    se = np.sqrt(np.maximum(np.diag(cov), 0.0) / sample.n)
    return AsymptoticResult(cov=cov, se=se)
