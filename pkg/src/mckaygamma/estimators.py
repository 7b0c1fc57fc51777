"""Point estimators for McKay's bivariate gamma distribution.

Two families of closed-form estimators are built from transform-dependent
sample means, plus maximum likelihood and a profile-likelihood selector for
the transform tuning constants (r, s).

First family (Z-statistics)
    Nine sample means z1..z9 of functions of (x_i, y_i) built from a pair of
    monotone maps (g1, g2).  Assembling them yields (alpha, beta, gamma) in
    closed form.  The identity maps recover the classical moment-type
    estimator (``estimate_zhao``); g(t) = exp(r t) - 1 gives the first
    proposed estimator (``estimate_proposed1``).

Second family (ratio statistics)
    Five sample means per map of functions of the ratio w_i = x_i / y_i,
    built from maps (l1, l2) of (0,1) onto (0,1).  l1(t) = t/(t+1) with
    l2(t) = -ln t / (1 - ln t) recovers the ratio moment estimator
    (``estimate_nawa``); l1 identity with l2(t) = (1 - t^(1/s))^(1/r) gives
    the second proposed estimator (``estimate_proposed2``).

All estimators canonicalize the pair order internally (sample means are
symmetric functions, and a fixed summation order makes permutation
invariance exact in floating point).  Non-positive closed-form estimates are
reported with ``converged=False`` rather than clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import (
    DegenerateStatisticsError,
    DomainError,
    NoValidEstimateError,
    NumericRangeError,
)
from .model import BivariateSample, McKayParams, log_likelihood, loglik_or_nan

__all__ = [
    "ScalarMap",
    "TransformPairG",
    "RatioMap",
    "TransformPairL",
    "identity_pair",
    "exp_shift_pair",
    "nawa_pair",
    "power_ratio_pair",
    "SummaryZ",
    "SummaryU",
    "SummaryRatio",
    "summarize_z",
    "summarize_u",
    "summarize_ratio",
    "estimate_from_z",
    "estimate_from_u",
    "EstimateResult",
    "estimate_zhao",
    "estimate_proposed1",
    "estimate_nawa",
    "estimate_proposed2",
    "estimate_ml",
    "profile_select",
    "DEFAULT_GRID",
]

# profile grid for (r, s): 0.1 to 2.5 in steps of 0.1
DEFAULT_GRID = tuple(round(0.1 * k, 10) for k in range(1, 26))

_REL_TOL = 1e-12  # a denominator is "zero" when |den| < _REL_TOL * max(1, |num|)


def _canonical_xy(sample: BivariateSample):
    """Pairs in a fixed (lexicographic) order, so means never depend on
    the order the caller supplied."""
    order = np.lexsort((sample.y, sample.x))
    return sample.x[order], sample.y[order]


def _check_degenerate(num, den, what):
    if not np.isfinite(den) or abs(den) < _REL_TOL * max(1.0, abs(num)):
        raise DegenerateStatisticsError(
            f"degenerate statistics: {what} denominator {den!r} "
            f"is negligible against numerator {num!r}"
        )


# ---------------------------------------------------------------------------
# transform machinery, first family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarMap:
    """A monotone, twice-differentiable map g on (0, inf) used to build the
    Z-statistics.

    ``factors(x)`` returns the three ingredients evaluated at t = g^{-1}(x):

        W(x) = g'(t) * t * ln t
        V(x) = (g''(t) / g'(t)) * t * ln t
        L(x) = ln t

    computed in closed form per family, which avoids round-tripping through
    exp/log and keeps the statistics stable.
    """

    tag: str  # "identity" | "exp_shift"
    param: float = 1.0

    def __post_init__(self):
        if self.tag not in ("identity", "exp_shift"):
            raise DomainError(f"unknown scalar map tag {self.tag!r}")
        if self.tag == "exp_shift" and not (
            np.isfinite(self.param) and self.param > 0
        ):
            raise DomainError("exp_shift parameter must be finite and > 0")

    def forward(self, t):
        t = np.asarray(t, dtype=float)
        if self.tag == "identity":
            return t + 0.0
        return np.expm1(self.param * t)

    def inverse(self, x):
        x = np.asarray(x, dtype=float)
        if self.tag == "identity":
            return x + 0.0
        return np.log1p(x) / self.param

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        if self.tag == "identity":
            return np.ones_like(t)
        return self.param * np.exp(self.param * t)

    def deriv2(self, t):
        t = np.asarray(t, dtype=float)
        if self.tag == "identity":
            return np.zeros_like(t)
        return self.param**2 * np.exp(self.param * t)

    def factors(self, x):
        x = np.asarray(x, dtype=float)
        if self.tag == "identity":
            lx = np.log(x)
            return x * lx, np.zeros_like(x), lx
        r = self.param
        # Overflow to inf on extreme inputs is detected by the caller and
        # reported as NumericRangeError, so the warning is suppressed here.
        with np.errstate(over="ignore", invalid="ignore"):
            lx = np.log1p(x)
            ll = np.log(lx / r)
            w = (1.0 + x) * lx * ll
        return w, lx * ll, ll


@dataclass(frozen=True)
class TransformPairG:
    g1: ScalarMap
    g2: ScalarMap


def identity_pair() -> TransformPairG:
    return TransformPairG(ScalarMap("identity"), ScalarMap("identity"))


def exp_shift_pair(r: float, s: float) -> TransformPairG:
    return TransformPairG(ScalarMap("exp_shift", r), ScalarMap("exp_shift", s))


@dataclass(frozen=True)
class SummaryZ:
    """The nine sample means z1..z9 of the first family."""

    z1: float
    z2: float
    z3: float
    z4: float
    z5: float
    z6: float
    z7: float
    z8: float
    z9: float

    def as_array(self):
        return np.array(
            [
                self.z1,
                self.z2,
                self.z3,
                self.z4,
                self.z5,
                self.z6,
                self.z7,
                self.z8,
                self.z9,
            ]
        )


def h_matrix(sample: BivariateSample, g: TransformPairG):
    """The n x 9 matrix of per-observation statistics whose column means are
    z1..z9: columns (y, L1, V1, W1/x, W1/(y-x), L2, V2, W2/(y-x), W2)."""
    x, y = _canonical_xy(sample)
    w1, v1, l1 = g.g1.factors(x)
    w2, v2, l2 = g.g2.factors(y)
    cols = np.column_stack(
        [y, l1, v1, w1 / x, w1 / (y - x), l2, v2, w2 / (y - x), w2]
    )
    if not np.all(np.isfinite(cols)):
        raise NumericRangeError(
            "transform statistics overflowed the floating-point range"
        )
    return cols


def summarize_z(sample: BivariateSample, g: TransformPairG) -> SummaryZ:
    means = h_matrix(sample, g).mean(axis=0)
    return SummaryZ(*(float(m) for m in means))


def estimate_from_z(z):
    """Assemble (alpha, beta, gamma) from z1..z9.

    Accepts a SummaryZ or a 9-vector.  No positivity guarantee -- the caller
    decides what a non-positive estimate means.
    """
    if isinstance(z, SummaryZ):
        z = z.as_array()
    z1, z2, z3, z4, z5, z6, z7, z8, z9 = (float(v) for v in z)
    if not np.isfinite(z1) or z1 <= 0.0:
        raise DegenerateStatisticsError(f"z1 (mean of y) must be > 0, got {z1!r}")
    num_b = (1.0 + z2 + z3 - z4 + z5) * z9 + (1.0 + z6 + z7 - z8) * z1 * z4
    den_b = (z9 - z1 * z8) * z4 + z5 * z9
    _check_degenerate(num_b, den_b, "beta")
    beta = num_b / den_b
    num_a = (beta - 1.0) * z5 - 1.0 - z2 - z3 + z4
    _check_degenerate(num_a, z4, "alpha")
    alpha = num_a / z4
    gamma = (alpha + beta) / z1
    return alpha, beta, gamma


# ---------------------------------------------------------------------------
# transform machinery, second family (ratio statistics)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioMap:
    """A monotone, twice-differentiable map l from (0,1) onto (0,1) used to
    build the ratio statistics.

    ``factors(w)`` returns, at t = l^{-1}(w):

        P(w) = l'(t) * t * ln t
        Q(w) = (l''(t) / l'(t)) * t * ln t
        R(w) = ln t

    again in closed form per family.
    """

    tag: str  # "identity" | "nawa_l1" | "nawa_l2" | "power"
    r: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        if self.tag not in ("identity", "nawa_l1", "nawa_l2", "power"):
            raise DomainError(f"unknown ratio map tag {self.tag!r}")
        if self.tag == "power" and not (
            np.isfinite(self.r) and self.r > 0 and np.isfinite(self.s) and self.s > 0
        ):
            raise DomainError("power map parameters must be finite and > 0")

    def forward(self, t):
        t = np.asarray(t, dtype=float)
        if self.tag == "identity":
            return t + 0.0
        if self.tag == "nawa_l1":
            return t / (1.0 + t)
        if self.tag == "nawa_l2":
            lt = np.log(t)
            return -lt / (1.0 - lt)
        return (1.0 - t ** (1.0 / self.s)) ** (1.0 / self.r)

    def inverse(self, w):
        w = np.asarray(w, dtype=float)
        if self.tag == "identity":
            return w + 0.0
        if self.tag == "nawa_l1":
            return w / (1.0 - w)
        if self.tag == "nawa_l2":
            return np.exp(-w / (1.0 - w))
        return (-np.expm1(self.r * np.log(w))) ** self.s

    def factors(self, w):
        w = np.asarray(w, dtype=float)
        if self.tag == "identity":
            lw = np.log(w)
            return w * lw, np.zeros_like(w), lw
        if self.tag == "nawa_l1":
            lo = np.log(w) - np.log1p(-w)  # ln(w / (1-w))
            return w * (1.0 - w) * lo, -2.0 * w * lo, lo
        if self.tag == "nawa_l2":
            p = w * (1.0 - w)
            q = w * (2.0 * w - 1.0) / (1.0 - w)
            return p, q, -w / (1.0 - w)
        r, s = self.r, self.s
        lw = np.log(w)
        t_comp = -np.expm1(r * lw)  # 1 - w^r
        log_t = np.log(t_comp)
        wr = np.exp(r * lw)
        p = -(1.0 / r) * np.exp((1.0 - r) * lw) * t_comp * log_t
        q = (1.0 / r) * ((r - 1.0) + (1.0 - r * s) * wr) / wr * log_t
        return p, q, s * log_t


@dataclass(frozen=True)
class TransformPairL:
    l1: RatioMap
    l2: RatioMap


def nawa_pair() -> TransformPairL:
    return TransformPairL(RatioMap("nawa_l1"), RatioMap("nawa_l2"))


def power_ratio_pair(r: float, s: float) -> TransformPairL:
    return TransformPairL(RatioMap("identity"), RatioMap("power", r, s))


@dataclass(frozen=True)
class SummaryU:
    """The 5 x 2 table of ratio-statistic sample means u[k, j] (k = 1..5
    statistics, j = 1..2 maps), plus the mean of y for the rate equation."""

    u: np.ndarray
    mean_y: float

    def __post_init__(self):
        arr = np.asarray(self.u, dtype=float)
        if arr.shape != (5, 2):
            raise DomainError("u must be a 5x2 array")
        object.__setattr__(self, "u", arr)


def theta_columns(w, l: RatioMap):
    """Per-observation ratio statistics (theta_1..theta_5) for one map."""
    p, q, r_ = l.factors(w)
    return np.column_stack(
        [
            p / w,
            p / (1.0 - w),
            q,
            (2.0 * w - 1.0) * p / (w * (1.0 - w)),
            r_,
        ]
    )


def summarize_u(sample: BivariateSample, l: TransformPairL) -> SummaryU:
    x, y = _canonical_xy(sample)
    w = x / y
    t1 = theta_columns(w, l.l1)
    t2 = theta_columns(w, l.l2)
    if not (np.all(np.isfinite(t1)) and np.all(np.isfinite(t2))):
        raise NumericRangeError(
            "ratio statistics overflowed the floating-point range"
        )
    u = np.column_stack([t1.mean(axis=0), t2.mean(axis=0)])
    return SummaryU(u, float(np.mean(y)))


def estimate_from_u(u: SummaryU):
    """Assemble (alpha, beta, gamma) from the ratio-statistic table by
    solving the 2 x 2 linear system

        alpha * u[1,j] - beta * u[2,j] + 1 + u[3,j] + u[4,j] + u[5,j] = 0

    for j = 1, 2, then gamma = (alpha + beta) / mean(y)."""
    m = u.u
    u11, u21, u31, u41, u51 = m[:, 0]
    u12, u22, u32, u42, u52 = m[:, 1]
    c1 = 1.0 + u31 + u41 + u51
    c2 = 1.0 + u32 + u42 + u52
    _check_degenerate(c1, u21, "first-map ratio")
    num_a = c1 * u22 / u21 - c2
    den_a = u12 - u11 * u22 / u21
    _check_degenerate(num_a, den_a, "alpha (ratio system)")
    alpha = num_a / den_a
    beta = (alpha * u11 + c1) / u21
    gamma = (alpha + beta) / u.mean_y
    return alpha, beta, gamma


@dataclass(frozen=True)
class SummaryRatio:
    """The six ratio statistics A..F of the second proposed estimator."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    r: float
    s: float


def summarize_ratio(sample: BivariateSample, r: float, s: float) -> SummaryRatio:
    x, y = _canonical_xy(sample)
    stats = _ratio_stats(x, y, r, s)
    if not all(np.isfinite(v) for v in stats):
        raise NumericRangeError(
            "ratio statistics overflowed the floating-point range"
        )
    return SummaryRatio(*stats, r, s)


def _ratio_stats(x, y, r, s):
    w = x / y
    lw = np.log(w)
    a = np.mean(lw)
    b = np.mean(x / (y - x) * lw)
    t_comp = -np.expm1(r * lw)  # 1 - w^r
    log_t = np.log(t_comp)
    wr = np.exp(r * lw)
    c = np.mean(t_comp / wr * log_t)
    d = np.mean(t_comp * w / wr / (1.0 - w) * log_t)
    f = np.mean(log_t)
    e = np.mean((r - t_comp - r * s * wr) * t_comp**s * w ** (2.0 * s - r) * log_t)
    return float(a), float(b), float(c), float(d), float(e), float(f)


def assemble_ratio(a, b, c, d, e, f, r, s, mean_y):
    """Solve the second-family system given the six statistics A..F.

    Shared by the shipped estimator and the machinery-based oracle tests,
    which supply different E statistics.
    """
    _check_degenerate(1.0, a, "A (mean log ratio)")
    num_b = -r - e - c + d - r * s * f - (b + 1.0) * c / a
    den_b = d - b * c / a
    _check_degenerate(num_b, den_b, "beta (ratio system)")
    beta = num_b / den_b
    alpha = ((beta - 1.0) * b - 1.0) / a
    gamma = (alpha + beta) / mean_y
    return alpha, beta, gamma


# ---------------------------------------------------------------------------
# named estimators
# ---------------------------------------------------------------------------


@dataclass
class EstimateResult:
    """A fitted parameter triple plus provenance.

    ``alpha``/``beta``/``gamma_rate`` hold the raw solution of the estimating
    equations, which for the closed-form methods may be non-positive on bad
    samples; ``converged`` is True only when the triple is a valid parameter
    vector (and, for ML, the score iteration met its tolerance).
    """

    alpha: float
    beta: float
    gamma_rate: float
    method: str
    loglik: float
    converged: bool
    r: float | None = None
    s: float | None = None
    iterations: int | None = None
    profile_skipped: int | None = None

    @property
    def params(self) -> McKayParams | None:
        if all(
            np.isfinite(v) and v > 0.0
            for v in (self.alpha, self.beta, self.gamma_rate)
        ):
            return McKayParams(self.alpha, self.beta, self.gamma_rate)
        return None

    def as_array(self):
        return np.array([self.alpha, self.beta, self.gamma_rate])


def _is_valid_triple(alpha, beta, gamma):
    return all(np.isfinite(v) and v > 0.0 for v in (alpha, beta, gamma))


def _require_n(sample, k=2):
    if sample.n < k:
        raise DomainError(f"need at least {k} pairs, got {sample.n}")


def estimate_zhao(sample: BivariateSample) -> EstimateResult:
    """Closed-form moment-type estimator from log statistics of (x, y)."""
    _require_n(sample)
    x, y = _canonical_xy(sample)
    lx = np.log(x)
    ly = np.log(y)
    z1 = float(np.mean(y))
    z2 = float(np.mean(lx))
    z5 = float(np.mean(x * lx / (y - x)))
    z6 = float(np.mean(ly))
    z8 = float(np.mean(y * ly / (y - x)))
    z9 = float(np.mean(y * ly))
    num_b = (1.0 + z5) * z9 + (1.0 + z6 - z8) * z1 * z2
    den_b = (z9 - z1 * z8) * z2 + z5 * z9
    _check_degenerate(num_b, den_b, "beta")
    beta = num_b / den_b
    num_a = (beta - 1.0) * z5 - 1.0
    _check_degenerate(num_a, z2, "alpha")
    alpha = num_a / z2
    gamma = (alpha + beta) / z1
    return EstimateResult(
        alpha,
        beta,
        gamma,
        method="zhao",
        loglik=loglik_or_nan(alpha, beta, gamma, sample),
        converged=_is_valid_triple(alpha, beta, gamma),
    )


def estimate_proposed1(sample: BivariateSample, r: float, s: float) -> EstimateResult:
    """First proposed estimator: Z-statistics under g(t) = exp(r t) - 1."""
    _require_n(sample)
    if not (np.isfinite(r) and r > 0 and np.isfinite(s) and s > 0):
        raise DomainError("r and s must be finite and > 0")
    z = summarize_z(sample, exp_shift_pair(r, s))
    alpha, beta, gamma = estimate_from_z(z)
    return EstimateResult(
        alpha,
        beta,
        gamma,
        method="proposed1",
        loglik=loglik_or_nan(alpha, beta, gamma, sample),
        converged=_is_valid_triple(alpha, beta, gamma),
        r=float(r),
        s=float(s),
    )


def _nawa_core(x, y):
    w = x / y
    lo = np.log(x / (y - x))
    mw = float(np.mean(w))
    den = float(np.mean(w * lo)) - mw * float(np.mean(lo))
    _check_degenerate(max(abs(mw), abs(1.0 - mw)), den, "ratio covariance")
    alpha = mw / den
    beta = (1.0 - mw) / den
    gamma = 1.0 / (float(np.mean(y)) * den)
    return alpha, beta, gamma


def estimate_nawa(sample: BivariateSample) -> EstimateResult:
    """Closed-form ratio moment estimator based on w = x / y."""
    _require_n(sample)
    x, y = _canonical_xy(sample)
    alpha, beta, gamma = _nawa_core(x, y)
    return EstimateResult(
        alpha,
        beta,
        gamma,
        method="nawa",
        loglik=loglik_or_nan(alpha, beta, gamma, sample),
        converged=_is_valid_triple(alpha, beta, gamma),
    )


def estimate_proposed2(sample: BivariateSample, r: float, s: float) -> EstimateResult:
    """Second proposed estimator: ratio statistics under the power map."""
    _require_n(sample)
    if not (np.isfinite(r) and r > 0 and np.isfinite(s) and s > 0):
        raise DomainError("r and s must be finite and > 0")
    ratio = summarize_ratio(sample, r, s)
    x, y = _canonical_xy(sample)
    alpha, beta, gamma = assemble_ratio(
        ratio.a,
        ratio.b,
        ratio.c,
        ratio.d,
        ratio.e,
        ratio.f,
        r,
        s,
        float(np.mean(y)),
    )
    return EstimateResult(
        alpha,
        beta,
        gamma,
        method="proposed2",
        loglik=loglik_or_nan(alpha, beta, gamma, sample),
        converged=_is_valid_triple(alpha, beta, gamma),
        r=float(r),
        s=float(s),
    )


def estimate_ml(
    sample: BivariateSample, tol: float = 1e-10, max_iter: int = 100
) -> EstimateResult:
    """Maximum likelihood via damped Newton on the rate-eliminated scores.

    With gamma profiled out as (alpha + beta) / mean(y), the remaining score
    system is

        psi(alpha) - ln(alpha + beta) = mean ln x   - ln mean y
        psi(beta)  - ln(alpha + beta) = mean ln(y-x) - ln mean y

    whose residuals equal the full per-observation scores.  Newton steps use
    the trigamma Jacobian and are halved until alpha, beta stay positive and
    the residual norm does not increase.
    """
    _require_n(sample)
    x, y = _canonical_xy(sample)
    if np.any(y - x < 1e-300):
        raise DomainError("sample has y - x below 1e-300; likelihood is degenerate")
    c1 = float(np.mean(np.log(x))) - math.log(float(np.mean(y)))
    c2 = float(np.mean(np.log(y - x))) - math.log(float(np.mean(y)))
    mean_y = float(np.mean(y))

    try:
        a, b, _ = _nawa_core(x, y)
        if not (np.isfinite(a) and a > 0 and np.isfinite(b) and b > 0):
            a, b = 1.0, 1.0
    except DegenerateStatisticsError:
        a, b = 1.0, 1.0

    def residual(aa, bb):
        lab = math.log(aa + bb)
        return np.array(
            [specfun.digamma(aa) - lab - c1, specfun.digamma(bb) - lab - c2]
        )

    converged = False
    iterations = 0
    for _ in range(max_iter):
        f = residual(a, b)
        if np.max(np.abs(f)) <= tol:
            converged = True
            break
        inv_ab = 1.0 / (a + b)
        jac = np.array(
            [
                [specfun.trigamma(a) - inv_ab, -inv_ab],
                [-inv_ab, specfun.trigamma(b) - inv_ab],
            ]
        )
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        f0 = np.max(np.abs(f))
        moved = False
        for _ in range(60):
            a_new, b_new = a + t * step[0], b + t * step[1]
            if a_new > 0 and b_new > 0:
                if np.max(np.abs(residual(a_new, b_new))) <= f0:
                    a, b = a_new, b_new
                    moved = True
                    break
            t /= 2.0
        iterations += 1
        if not moved:
            break

    gamma = (a + b) / mean_y
    return EstimateResult(
        a,
        b,
        gamma,
        method="ml",
        loglik=loglik_or_nan(a, b, gamma, sample),
        converged=converged and _is_valid_triple(a, b, gamma),
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# profile selection of (r, s)
# ---------------------------------------------------------------------------


def _loglik_grid(alpha, beta, gamma, valid, sample):
    """Log-likelihood on parameter arrays via sufficient statistics; -inf
    where the candidate is invalid."""
    n = sample.n
    slx = float(np.sum(np.log(sample.x)))
    slyx = float(np.sum(np.log(sample.y - sample.x)))
    sy = float(np.sum(sample.y))
    a = np.where(valid, alpha, 1.0)
    b = np.where(valid, beta, 1.0)
    g = np.where(valid, gamma, 1.0)
    ll = (
        n * ((a + b) * np.log(g) - specfun.log_gamma(a) - specfun.log_gamma(b))
        + (a - 1.0) * slx
        + (b - 1.0) * slyx
        - g * sy
    )
    return np.where(valid, ll, -np.inf)


def _grid_candidates_p1(sample, grid_r, grid_s):
    """Vectorized Z-statistics over the (r, s) grid.

    Every z-statistic of the exp-shift family is affine in ln r (first map)
    or ln s (second map), so nine base means cover the whole grid.
    """
    x, y = _canonical_xy(sample)
    # Non-finite statistics on extreme inputs turn into NaN candidates that
    # the caller skips, so overflow warnings are suppressed throughout.
    with np.errstate(over="ignore", invalid="ignore"):
        lx = np.log1p(x)
        ly = np.log1p(y)
        llx = np.log(lx)
        lly = np.log(ly)
        yx = y - x

        z1 = float(np.mean(y))
        m2a, m2b = np.mean(llx), 1.0
        m3a, m3b = np.mean(lx * llx), np.mean(lx)
        g4 = (1.0 + x) * lx / x
        m4a, m4b = np.mean(g4 * llx), np.mean(g4)
        g5 = (1.0 + x) * lx / yx
        m5a, m5b = np.mean(g5 * llx), np.mean(g5)
        m6a, m6b = np.mean(lly), 1.0
        m7a, m7b = np.mean(ly * lly), np.mean(ly)
        g8 = (1.0 + y) * ly / yx
        m8a, m8b = np.mean(g8 * lly), np.mean(g8)
        g9 = (1.0 + y) * ly
        m9a, m9b = np.mean(g9 * lly), np.mean(g9)

        log_r = np.log(grid_r)[:, None]  # (R, 1)
        log_s = np.log(grid_s)[None, :]  # (1, S)
        z2 = m2a - m2b * log_r
        z3 = m3a - m3b * log_r
        z4 = m4a - m4b * log_r
        z5 = m5a - m5b * log_r
        z6 = m6a - m6b * log_s
        z7 = m7a - m7b * log_s
        z8 = m8a - m8b * log_s
        z9 = m9a - m9b * log_s

        num_b = (1.0 + z2 + z3 - z4 + z5) * z9 + (1.0 + z6 + z7 - z8) * z1 * z4
        den_b = (z9 - z1 * z8) * z4 + z5 * z9
    ok_b = np.abs(den_b) >= _REL_TOL * np.maximum(1.0, np.abs(num_b))
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = np.where(ok_b, num_b / np.where(ok_b, den_b, 1.0), np.nan)
        num_a = (beta - 1.0) * z5 - 1.0 - z2 - z3 + z4
        ok_a = np.abs(z4) >= _REL_TOL * np.maximum(1.0, np.abs(num_a))
        alpha = np.where(ok_a, num_a / np.where(ok_a, z4, 1.0), np.nan)
        gamma = (alpha + beta) / z1
    return alpha, beta, gamma


def _grid_candidates_p2(sample, grid_r, grid_s):
    """Ratio statistics of the power family over the (r, s) grid: A, B and
    the per-r statistics are shared across s, and the s dependence is
    vectorized row by row."""
    x, y = _canonical_xy(sample)
    w = x / y
    lw = np.log(w)
    a_stat = float(np.mean(lw))
    b_stat = float(np.mean(x / (y - x) * lw))
    mean_y = float(np.mean(y))
    s_col = grid_s[:, None]  # (S, 1)

    nr, ns = grid_r.size, grid_s.size
    alpha = np.full((nr, ns), np.nan)
    beta = np.full((nr, ns), np.nan)
    gamma = np.full((nr, ns), np.nan)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for i, r in enumerate(grid_r):
            t_comp = -np.expm1(r * lw)
            log_t = np.log(t_comp)
            wr = np.exp(r * lw)
            c = np.mean(t_comp / wr * log_t)
            d = np.mean(t_comp * w / wr / (1.0 - w) * log_t)
            f = np.mean(log_t)
            weight = np.exp(s_col * log_t + (2.0 * s_col - r) * lw)  # (S, n)
            coef = r - t_comp[None, :] - r * s_col * wr[None, :]
            e = np.mean(coef * weight * log_t[None, :], axis=1)  # (S,)
            num_b = -r - e - c + d - r * grid_s * f - (b_stat + 1.0) * c / a_stat
            den_b = d - b_stat * c / a_stat
            ok = np.abs(den_b) >= _REL_TOL * np.maximum(1.0, np.abs(num_b))
            row_beta = np.where(ok, num_b / np.where(ok, den_b, 1.0), np.nan)
            row_alpha = ((row_beta - 1.0) * b_stat - 1.0) / a_stat
            beta[i] = row_beta
            alpha[i] = row_alpha
            gamma[i] = (row_alpha + row_beta) / mean_y
    return alpha, beta, gamma


def profile_select(
    sample: BivariateSample,
    family: str,
    grid_r=DEFAULT_GRID,
    grid_s=DEFAULT_GRID,
) -> EstimateResult:
    """Pick (r, s) on a grid by maximizing the log-likelihood at the induced
    closed-form estimates.

    Grid points whose estimating equations fail or whose estimates are not
    strictly positive are skipped (their count is reported in
    ``profile_skipped``); ties break toward the lexicographically smallest
    (r, s).
    """
    _require_n(sample)
    if family not in ("proposed1", "proposed2"):
        raise DomainError(f"unknown profile family {family!r}")
    gr = np.unique(np.asarray(grid_r, dtype=float))
    gs = np.unique(np.asarray(grid_s, dtype=float))
    if gr.size == 0 or gs.size == 0:
        raise DomainError("profile grids must be nonempty")
    if not (np.all(np.isfinite(gr)) and np.all(gr > 0)):
        raise DomainError("grid_r entries must be finite and > 0")
    if not (np.all(np.isfinite(gs)) and np.all(gs > 0)):
        raise DomainError("grid_s entries must be finite and > 0")

    if family == "proposed1":
        alpha, beta, gamma = _grid_candidates_p1(sample, gr, gs)
    else:
        alpha, beta, gamma = _grid_candidates_p2(sample, gr, gs)

    valid = (
        np.isfinite(alpha)
        & np.isfinite(beta)
        & np.isfinite(gamma)
        & (alpha > 0)
        & (beta > 0)
        & (gamma > 0)
    )
    skipped = int(valid.size - np.count_nonzero(valid))
    if not np.any(valid):
        raise NoValidEstimateError(
            f"no grid point produced a valid {family} estimate "
            f"({skipped} of {valid.size} skipped)"
        )
    ll = _loglik_grid(alpha, beta, gamma, valid, sample)
    # row-major argmax over (sorted r) x (sorted s) = lexicographically
    # smallest maximizer
    flat = int(np.argmax(ll))
    i, j = divmod(flat, gs.size)
    r_hat, s_hat = float(gr[i]), float(gs[j])

    fit = (estimate_proposed1 if family == "proposed1" else estimate_proposed2)(
        sample, r_hat, s_hat
    )
    fit.profile_skipped = skipped
    return fit
