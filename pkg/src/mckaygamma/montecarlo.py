"""Monte Carlo benchmark harness for the estimator families.

A Scenario bundles true parameters, a sample size, a replication count, and
the estimators to compare.  ``run_scenario`` replays it: replicate j draws
its sample on the substream (base_seed, scenario_index, j), applies every
method, and aggregates the converged estimates into absolute bias (AB),
mean absolute relative error (MARE), and root mean square error (RMSE) per
parameter.  Replicates where a method fails (degenerate statistics,
non-convergence, or a non-positive estimate) are excluded from that
method's metrics and counted instead -- no value is fabricated.

``run_paper_suite`` is the standard benchmark: four parameter scenarios
x n in {20, 50, 100} x five methods (both proposed estimators with profile
selection on the default grid, maximum likelihood, and the two classical
closed-form estimators), 1000 replicates each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import estimators as est
from .errors import DomainError, EstimationError, NumericRangeError
from .model import BivariateSample, McKayParams, sample_mckay
from .specfun import mix64

__all__ = [
    "MethodSpec",
    "Scenario",
    "MCRow",
    "MCReport",
    "default_methods",
    "metrics",
    "run_scenario",
    "paper_scenarios",
    "run_paper_suite",
    "PARAM_NAMES",
]

PARAM_NAMES = ("alpha", "beta", "gamma")

_PAPER_PARAMS = (
    McKayParams(1.7, 1.5, 1.1),
    McKayParams(3.0, 1.0, 2.0),
    McKayParams(2.5, 4.0, 0.6),
    McKayParams(1.2, 3.5, 1.5),
)
_PAPER_SIZES = (20, 50, 100)


@dataclass(frozen=True)
class MethodSpec:
    """How to fit one estimator inside the harness.

    ``name`` is one of ml / zhao / nawa / proposed1 / proposed2.  For the
    proposed families, either fix (r, s) or leave them None to profile over
    the given grids (default grid when those are None too).
    """

    name: str
    r: float | None = None
    s: float | None = None
    grid_r: tuple | None = None
    grid_s: tuple | None = None

    def __post_init__(self):
        if self.name not in ("ml", "zhao", "nawa", "proposed1", "proposed2"):
            raise DomainError(f"unknown method {self.name!r}")

    def fit(self, sample: BivariateSample) -> est.EstimateResult:
        if self.name == "ml":
            return est.estimate_ml(sample)
        if self.name == "zhao":
            return est.estimate_zhao(sample)
        if self.name == "nawa":
            return est.estimate_nawa(sample)
        fixed = self.r is not None and self.s is not None
        if fixed:
            fn = (
                est.estimate_proposed1
                if self.name == "proposed1"
                else est.estimate_proposed2
            )
            return fn(sample, self.r, self.s)
        return est.profile_select(
            sample,
            self.name,
            self.grid_r if self.grid_r is not None else est.DEFAULT_GRID,
            self.grid_s if self.grid_s is not None else est.DEFAULT_GRID,
        )


def default_methods() -> tuple[MethodSpec, ...]:
    """The five-method comparison set (proposed estimators profiled)."""
    return (
        MethodSpec("proposed1"),
        MethodSpec("proposed2"),
        MethodSpec("ml"),
        MethodSpec("zhao"),
        MethodSpec("nawa"),
    )


@dataclass(frozen=True)
class Scenario:
    params: McKayParams
    n: int
    m: int
    methods: tuple[MethodSpec, ...] = field(default_factory=default_methods)
    index: int = 0  # stream index: replicate j draws on (base_seed, index, j)
    label: str = "1"

    def __post_init__(self):
        if int(self.n) < 2:
            raise DomainError("scenario n must be >= 2")
        if int(self.m) < 1:
            raise DomainError("scenario m must be >= 1")


@dataclass(frozen=True)
class MCRow:
    scenario: str
    n: int
    method: str
    param: str
    ab: float
    mare: float
    rmse: float
    failures: int


@dataclass(frozen=True)
class MCReport:
    rows: tuple[MCRow, ...]

    def select(self, **matches):
        """Rows whose fields equal all the given values, e.g.
        report.select(scenario="1", method="ml", param="alpha")."""
        out = []
        for row in self.rows:
            if all(getattr(row, k) == v for k, v in matches.items()):
                out.append(row)
        return out

    def value(self, metric, **matches):
        rows = self.select(**matches)
        if len(rows) != 1:
            raise KeyError(f"{matches} matched {len(rows)} rows, expected 1")
        return getattr(rows[0], metric)


def metrics(estimates, truth: McKayParams):
    """AB, MARE, RMSE per parameter over a set of estimate triples.

        AB   = |mean(est) - theta|
        MARE = mean(|est - theta| / theta)
        RMSE = sqrt(mean((est - theta)^2))
    """
    arr = np.asarray(estimates, dtype=float)
    if arr.size == 0:
        raise DomainError("metrics need at least one estimate")
    arr = arr.reshape(-1, 3)
    theta = truth.as_array()
    ab = np.abs(arr.mean(axis=0) - theta)
    mare = np.mean(np.abs(arr - theta) / theta, axis=0)
    rmse = np.sqrt(np.mean((arr - theta) ** 2, axis=0))
    return ab, mare, rmse


def run_scenario(scenario: Scenario, base_seed: int) -> MCReport:
    """Replay one scenario; see the module docstring for the protocol."""
    collected: dict[str, list] = {spec.name: [] for spec in scenario.methods}
    failures = {spec.name: 0 for spec in scenario.methods}
    for j in range(int(scenario.m)):
        sample = sample_mckay(
            scenario.params,
            scenario.n,
            seed=mix64(base_seed, scenario.index, j),
        )
        for spec in scenario.methods:
            try:
                res = spec.fit(sample)
            except (EstimationError, NumericRangeError, DomainError):
                failures[spec.name] += 1
                continue
            if res.converged and res.params is not None:
                collected[spec.name].append(res.as_array())
            else:
                failures[spec.name] += 1

    rows = []
    for spec in scenario.methods:
        got = collected[spec.name]
        if got:
            ab, mare, rmse = metrics(got, scenario.params)
        else:
            ab = mare = rmse = np.full(3, np.nan)
        for p, param in enumerate(PARAM_NAMES):
            rows.append(
                MCRow(
                    scenario=scenario.label,
                    n=scenario.n,
                    method=spec.name,
                    param=param,
                    ab=float(ab[p]),
                    mare=float(mare[p]),
                    rmse=float(rmse[p]),
                    failures=failures[spec.name],
                )
            )
    return MCReport(tuple(rows))


def paper_scenarios(m: int = 1000) -> tuple[Scenario, ...]:
    """The standard 4 x 3 benchmark grid as 12 scenario cells.

    Cells of the same parameter set share a stream index, so replicate j of
    scenario i uses substream (base_seed, i, j) at every sample size.
    """
    cells = []
    for i, params in enumerate(_PAPER_PARAMS):
        for n in _PAPER_SIZES:
            cells.append(
                Scenario(
                    params=params,
                    n=n,
                    m=m,
                    methods=default_methods(),
                    index=i,
                    label=str(i + 1),
                )
            )
    return tuple(cells)


def run_paper_suite(
    base_seed: int, m: int = 1000, n_jobs: int = 1, scenarios=None
) -> MCReport:
    """All 12 cells x 5 methods, metrics per parameter (180 rows at the
    default methods).  Deterministic in base_seed for any n_jobs: every cell
    owns its substreams and results are concatenated in cell order.  Pass
    ``scenarios`` to benchmark a custom cell list instead of the full grid."""
    cells = paper_scenarios(m) if scenarios is None else tuple(scenarios)
    if n_jobs == 1:
        reports = [run_scenario(c, base_seed) for c in cells]
    else:
        from joblib import Parallel, delayed

        reports = Parallel(n_jobs=n_jobs)(
            delayed(run_scenario)(c, base_seed) for c in cells
        )
    rows = []
    for rep in reports:
        rows.extend(rep.rows)
    return MCReport(tuple(rows))
