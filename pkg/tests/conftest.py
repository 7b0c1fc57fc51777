"""Shared fixtures: the bundled rainfall data and a fixed simulation corpus."""

import pytest

import mckaygamma as mg
from mckaygamma.specfun import mix64

# The four parameter sets used throughout the benchmark grid.
SCENARIO_PARAMS = (
    mg.McKayParams(1.7, 1.5, 1.1),
    mg.McKayParams(3.0, 1.0, 2.0),
    mg.McKayParams(2.5, 4.0, 0.6),
    mg.McKayParams(1.2, 3.5, 1.5),
)


@pytest.fixture(scope="session")
def rainfall():
    return mg.load_rainfall()


@pytest.fixture(scope="session")
def corpus():
    """100 simulated datasets: 4 parameter sets x 25 draws, n alternating
    between 100 and 20.  Seeded once and reused so every test that walks the
    corpus sees identical data."""
    out = []
    for i, params in enumerate(SCENARIO_PARAMS):
        for j in range(25):
            n = 20 if j % 2 else 100
            sample = mg.sample_mckay(params, n, mix64(777, i, j, n))
            out.append((params, sample))
    return tuple(out)
