"""Resampling-based uncertainty and goodness of fit.

Two tools:

* ``bootstrap_se`` -- moving-block bootstrap standard errors for any
  estimator.  Blocks are circular (wrap-around) so every observation has the
  same inclusion probability; ``block_len=1`` is the ordinary iid pairs
  bootstrap.  Non-converged replicates are dropped and counted.

* ``cvm_uniformity`` / ``gof_mckay`` -- a Cramér-von Mises-type test that
  the (Rosenblatt-transformed) pairs are iid Uniform(0,1)^2.  The statistic
  is S = sum_i (F_n(u_i, v_i) - u_i v_i)^2 with F_n the empirical joint CDF
  (<= convention, so a point counts itself); the null distribution is
  simulated from fresh iid uniform sets of the same size, without
  re-estimating parameters, and the p-value is (1 + #{S_b >= S_obs})/(b + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import (
    DomainError,
    EstimationError,
    InsufficientReplicatesError,
    NumericRangeError,
)
from .model import BivariateSample, McKayParams, rosenblatt

__all__ = [
    "BootstrapConfig",
    "BootstrapResult",
    "GofResult",
    "default_block_len",
    "bootstrap_se",
    "cvm_statistic",
    "cvm_uniformity",
    "gof_mckay",
]

# up to this sample size the O(n^2) empirical-CDF evaluation is used; it is
# exact for tied coordinates, which the merge-counting path is not
_EXACT_CDF_MAX_N = 2048


def default_block_len(n: int) -> int:
    """ceil(n^(1/3)), the standard moving-block rate (5 for n = 118)."""
    return int(math.ceil(round(n ** (1.0 / 3.0), 9)))


@dataclass(frozen=True)
class BootstrapConfig:
    b: int = 2000
    block_len: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.b) < 1:
            raise DomainError("bootstrap replicate count b must be >= 1")
        if int(self.block_len) < 1:
            raise DomainError("block_len must be >= 1")


@dataclass(frozen=True)
class BootstrapResult:
    """Standard errors plus the converged replicate estimates behind them."""

    se: np.ndarray
    replicates: np.ndarray
    n_converged: int
    n_failed: int


@dataclass(frozen=True)
class GofResult:
    statistic: float
    p_value: float
    b: int


def moving_block_indices(n: int, block_len: int, rng) -> np.ndarray:
    """Index vector of one circular moving-block resample of length n."""
    k = -(-n // block_len)  # ceil
    starts = rng.integers(0, n, size=k)
    idx = (starts[:, None] + np.arange(block_len)) % n
    return idx.ravel()[:n]


def bootstrap_se(
    sample: BivariateSample, estimator, cfg: BootstrapConfig
) -> BootstrapResult:
    """Moving-block bootstrap standard errors of an estimator.

    ``estimator`` maps a BivariateSample to an EstimateResult.  Replicate r
    draws its blocks from the substream (cfg.seed, r), so results are
    deterministic and independent of any parallel scheduling.  SEs are the
    ddof=1 standard deviations over converged replicates; fewer than 10 of
    them is an error.
    """
    n = sample.n
    if cfg.block_len > n:
        raise DomainError(f"block_len {cfg.block_len} exceeds sample size {n}")
    x, y = sample.x, sample.y
    kept = []
    failed = 0
    for r in range(int(cfg.b)):
        rng = specfun.substream(cfg.seed, r)
        idx = moving_block_indices(n, int(cfg.block_len), rng)
        resample = BivariateSample(x[idx], y[idx])
        try:
            res = estimator(resample)
        except (EstimationError, NumericRangeError, DomainError):
            failed += 1
            continue
        if res.converged and res.params is not None:
            kept.append(res.as_array())
        else:
            failed += 1
    if len(kept) < 10:
        raise InsufficientReplicatesError(
            f"only {len(kept)} of {cfg.b} bootstrap replicates converged"
        )
    reps = np.vstack(kept)
    return BootstrapResult(
        se=np.std(reps, axis=0, ddof=1),
        replicates=reps,
        n_converged=len(kept),
        n_failed=failed,
    )


# ---------------------------------------------------------------------------
# Cramér-von Mises-type uniformity test
# ---------------------------------------------------------------------------


def _validate_unit_open(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape or u.size == 0:
        raise DomainError("u and v must be nonempty 1-D arrays of equal length")
    for name, arr in (("u", u), ("v", v)):
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise DomainError(f"{name} coordinates must lie strictly in (0, 1)")
    return u, v


def _dominance_counts_exact(u, v):
    """counts[i] = #{j : u_j <= u_i and v_j <= v_i}, by direct comparison.

    O(n^2) but vectorized and exact under ties; evaluated in row chunks to
    bound memory.
    """
    n = u.size
    counts = np.empty(n, dtype=np.int64)
    chunk = max(1, int(4_000_000 // max(n, 1)))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        blk = (u[None, :] <= u[lo:hi, None]) & (v[None, :] <= v[lo:hi, None])
        counts[lo:hi] = blk.sum(axis=1)
    return counts


def _dominance_counts_batch(u, v):
    """Dominance counts for a batch: u, v of shape (m, n) -> counts (m, n).

    Bottom-up merge counting on the v-values after sorting each row by u:
    at each level, for every element of a right-hand run, count the
    left-hand-run elements with v <= it via one global searchsorted (runs
    are made globally sorted by adding a distinct offset per run).  Cost
    O(m n log^2 n), all in vectorized numpy ops.

    Assumes u has no ties within a row (almost surely true for the
    continuous inputs this is used for); v ties are handled exactly.
    """
    m, n = u.shape
    order = np.argsort(u, axis=1, kind="stable")
    vals = np.take_along_axis(v, order, axis=1)

    p = 1
    while p < n:
        p *= 2
    if p > n:
        pad = np.full((m, p - n), 1.5)
        vals = np.concatenate([vals, pad], axis=1)
        order = np.concatenate(
            [order, np.full((m, p - n), -1, dtype=order.dtype)], axis=1
        )
    counts = np.zeros((m, p), dtype=np.int64)

    run = 1
    while run < p:
        nruns = p // (2 * run)
        blocks_v = vals.reshape(m, nruns, 2 * run)
        left = blocks_v[:, :, :run]
        right = blocks_v[:, :, run:]
        # make all left runs one globally sorted array via per-run offsets
        offs = 2.0 * np.arange(m * nruns, dtype=float).reshape(m, nruns, 1)
        flat_left = (left + offs).reshape(-1)
        queries = (right + offs).reshape(-1)
        pos = np.searchsorted(flat_left, queries, side="right")
        base = np.repeat(np.arange(m * nruns, dtype=np.int64) * run, run)
        add = (pos - base).reshape(m, nruns, run)
        counts.reshape(m, nruns, 2 * run)[:, :, run:] += add
        # merge the runs (values, counts, and identities move together)
        merged = np.argsort(blocks_v, axis=2, kind="stable")
        vals = np.take_along_axis(blocks_v, merged, axis=2).reshape(m, p)
        counts = np.take_along_axis(
            counts.reshape(m, nruns, 2 * run), merged, axis=2
        ).reshape(m, p)
        order = np.take_along_axis(
            order.reshape(m, nruns, 2 * run), merged, axis=2
        ).reshape(m, p)
        run *= 2

    out = np.zeros((m, n), dtype=np.int64)
    real = order >= 0
    rows = np.broadcast_to(np.arange(m)[:, None], order.shape)[real]
    out[rows, order[real]] = counts[real] + 1  # + self
    return out


def _statistic_from_counts(u, v, counts):
    fhat = counts / u.shape[-1]
    return np.sum((fhat - u * v) ** 2, axis=-1)


def _cvm_statistic_batch(u, v):
    """Statistics for a batch of (m, n) coordinate arrays (internal; assumes
    coordinates already validated / simulated)."""
    if u.shape[1] <= _EXACT_CDF_MAX_N:
        stats = np.empty(u.shape[0])
        for i in range(u.shape[0]):
            stats[i] = _statistic_from_counts(
                u[i], v[i], _dominance_counts_exact(u[i], v[i])
            )
        return stats
    return _statistic_from_counts(u, v, _dominance_counts_batch(u, v))


def cvm_statistic(u, v) -> float:
    """S = sum_i (F_n(u_i, v_i) - u_i v_i)^2 for pairs in (0, 1)^2."""
    u, v = _validate_unit_open(u, v)
    n = u.size
    if n <= _EXACT_CDF_MAX_N or np.unique(u).size < n:
        counts = _dominance_counts_exact(u, v)
    else:
        counts = _dominance_counts_batch(u[None, :], v[None, :])[0]
    return float(_statistic_from_counts(u, v, counts))


def cvm_uniformity(pairs, b: int, seed: int) -> GofResult:
    """Test the pairs against iid Uniform(0,1)^2.

    ``pairs`` is an (n, 2) array or a (u, v) tuple.  The null distribution
    is built from ``b`` fresh sets of n iid uniform pairs (replicate k on
    substream (seed, k)); requires b >= 99 so the p-value resolution is at
    least 0.01.
    """
    if isinstance(pairs, tuple):
        u, v = pairs
    else:
        arr = np.asarray(pairs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("pairs must be an (n, 2) array or a (u, v) tuple")
        u, v = arr[:, 0], arr[:, 1]
    u, v = _validate_unit_open(u, v)
    b = int(b)
    if b < 99:
        raise DomainError("need b >= 99 null replicates")
    n = u.size
    s_obs = cvm_statistic(u, v)

    exceed = 0
    # evaluate null replicates in batches to amortize the vectorized counting
    batch = max(1, min(b, int(2_000_000 // max(n, 1)) or 1))
    k = 0
    while k < b:
        kb = min(batch, b - k)
        uu = np.empty((kb, n))
        vv = np.empty((kb, n))
        for j in range(kb):
            rng = specfun.substream(seed, k + j)
            uu[j] = rng.random(n)
            vv[j] = rng.random(n)
        stats = _cvm_statistic_batch(uu, vv)
        exceed += int(np.count_nonzero(stats >= s_obs))
        k += kb
    p = (1.0 + exceed) / (b + 1.0)
    return GofResult(statistic=s_obs, p_value=p, b=b)


def gof_mckay(
    sample: BivariateSample, params: McKayParams, b: int, seed: int
) -> GofResult:
    """Goodness of fit of fitted McKay parameters on a sample: Rosenblatt
    transform with the (once-)fitted parameters, then the uniformity test."""
    u, v = rosenblatt(params, sample)
    return cvm_uniformity((u, v), b=b, seed=seed)
