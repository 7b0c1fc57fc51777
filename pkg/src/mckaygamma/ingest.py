"""File formats and the rainfall pair-construction pipeline.

Formats (all plain delimited text, '#' starts a comment line):

* pairs file   -- header ``x,y``, one pair per row
* series file  -- one positive value per line, no header
* density grid -- header ``x,y,f``
* MC report    -- header ``scenario,n,method,param,ab,mare,rmse,failures``

Values are written with 12 significant digits; scientific notation is
accepted on read.  The bundled Los Angeles rainfall series (119 consecutive
seasonal totals, inches) ships with the package; ``load_rainfall()`` turns
it into the n = 118 overlapping two-year pairs (x_t, x_t + x_{t+1}) used by
the application -- consecutive pairs share a season, which is the serial
dependence the moving-block bootstrap addresses.
"""

from __future__ import annotations

import io
import sys
from contextlib import contextmanager
from importlib import resources

import numpy as np

from .errors import DomainError
from .model import BivariateSample

__all__ = [
    "read_pairs",
    "write_pairs",
    "read_series",
    "rainfall_pairs",
    "load_rainfall_series",
    "load_rainfall",
    "write_density_grid",
    "write_report",
]


def _content_lines(fh):
    """Yield (lineno, stripped_text) for non-blank, non-comment lines."""
    for lineno, raw in enumerate(fh, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        yield lineno, text


def _parse_float(token, where):
    try:
        value = float(token)
    except ValueError:
        raise DomainError(f"{where}: cannot parse {token!r} as a number") from None
    if not np.isfinite(value):
        raise DomainError(f"{where}: non-finite value {token!r}")
    return value


def read_pairs(path) -> BivariateSample:
    """Read a pairs file (header ``x,y``) into a validated sample."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = _content_lines(fh)
        try:
            lineno, header = next(lines)
        except StopIteration:
            raise DomainError(f"{path}: empty file") from None
        cols = [c.strip().lower() for c in header.split(",")]
        if cols != ["x", "y"]:
            raise DomainError(
                f"{path}:{lineno}: expected header 'x,y', got {header!r}"
            )
        xs, ys = [], []
        for lineno, text in lines:
            toks = text.split(",")
            if len(toks) != 2:
                raise DomainError(
                    f"{path}:{lineno}: expected two comma-separated values"
                )
            where = f"{path}:{lineno}"
            x = _parse_float(toks[0], where)
            y = _parse_float(toks[1], where)
            if not (0.0 < x < y):
                raise DomainError(
                    f"{where}: pair ({x!r}, {y!r}) violates 0 < x < y"
                )
            xs.append(x)
            ys.append(y)
    if not xs:
        raise DomainError(f"{path}: no data rows")
    return BivariateSample(np.array(xs), np.array(ys))


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_pairs(sample: BivariateSample, path=None):
    """Write a pairs file (12 significant digits); path None means stdout."""
    with _open_out(path) as fh:
        fh.write("x,y\n")
        for x, y in zip(sample.x, sample.y):
            fh.write(f"{x:.12g},{y:.12g}\n")


def read_series(path_or_buffer) -> np.ndarray:
    """Read a one-column series of positive values (no header)."""
    if isinstance(path_or_buffer, (str, bytes)) or hasattr(path_or_buffer, "__fspath__"):
        fh = open(path_or_buffer, "r", encoding="utf-8")
        close = True
        name = str(path_or_buffer)
    else:
        fh = path_or_buffer
        close = False
        name = getattr(path_or_buffer, "name", "<series>")
    try:
        values = []
        for lineno, text in _content_lines(fh):
            for tok in text.replace(",", " ").split():
                v = _parse_float(tok, f"{name}:{lineno}")
                if v <= 0.0:
                    raise DomainError(
                        f"{name}:{lineno}: series values must be > 0, got {v!r}"
                    )
                values.append(v)
    finally:
        if close:
            fh.close()
    if len(values) < 2:
        raise DomainError(f"{name}: need at least 2 series values")
    return np.array(values)


def rainfall_pairs(series) -> BivariateSample:
    """Overlapping two-period pairs (x_t, x_t + x_{t+1}) from a series."""
    v = np.asarray(series, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise DomainError("series must be 1-D with at least 2 values")
    if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
        raise DomainError("series values must be finite and > 0")
    return BivariateSample(v[:-1], v[:-1] + v[1:])


def load_rainfall_series() -> np.ndarray:
    """The bundled 119-season Los Angeles rainfall series (inches)."""
    ref = resources.files("mckaygamma").joinpath("data/la_rainfall.csv")
    with ref.open("r", encoding="utf-8") as fh:
        return read_series(io.StringIO(fh.read()))


def load_rainfall() -> BivariateSample:
    """The bundled rainfall data as its n = 118 overlapping pairs."""
    return rainfall_pairs(load_rainfall_series())


def write_density_grid(grid, path=None):
    """Write an (m, 3) array of (x, y, f) rows under the header ``x,y,f``."""
    arr = np.asarray(grid, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError("grid must be an (m, 3) array of (x, y, f) rows")
    with _open_out(path) as fh:
        fh.write("x,y,f\n")
        for x, y, f in arr:
            fh.write(f"{x:.12g},{y:.12g},{f:.12g}\n")


def write_report(report, path=None):
    """Write an MCReport under the header
    ``scenario,n,method,param,ab,mare,rmse,failures``."""
    with _open_out(path) as fh:
        fh.write("scenario,n,method,param,ab,mare,rmse,failures\n")
        for row in report.rows:
            fh.write(
                f"{row.scenario},{row.n},{row.method},{row.param},"
                f"{row.ab:.12g},{row.mare:.12g},{row.rmse:.12g},{row.failures}\n"
            )
