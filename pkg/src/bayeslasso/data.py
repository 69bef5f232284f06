"""Dataset ingestion and preparation.

CSV in, centered response and standardized design matrix out, with the
Gram quantities the Gibbs samplers consume precomputed once. Also provides
the seeded synthetic-regression generator used by the test and benchmark
fixtures.
"""

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DataFormatError, ParameterError

__all__ = [
    "Dataset",
    "RegressionData",
    "load_csv",
    "write_csv",
    "standardize",
    "synth_regression",
]

_MISSING_TOKENS = {"", "na", "nan", "null"}


@dataclass
class Dataset:
    """Raw rectangular data: response vector, predictor matrix, names."""

    name: str
    y_raw: np.ndarray
    X_raw: np.ndarray
    column_names: list
    response_name: str = "y"

    @property
    def n(self):
        return self.y_raw.shape[0]

    @property
    def p0(self):
        return self.X_raw.shape[1]


@dataclass
class RegressionData:
    """Centered/standardized regression inputs plus precomputed Grams."""

    y: np.ndarray
    X: np.ndarray
    XtX: np.ndarray
    Xty: np.ndarray
    y_sq_norm: float
    col_sq_norms: np.ndarray
    column_names: list = field(default_factory=list)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    @classmethod
    def from_matrix(cls, X, y, column_names=None):
        X = np.ascontiguousarray(X, dtype=float)
        y = np.ascontiguousarray(y, dtype=float)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise DataFormatError(
                f"incompatible shapes X{X.shape} and y{y.shape}"
            )
        names = list(column_names) if column_names else [
            f"x{j + 1}" for j in range(X.shape[1])
        ]
        return cls(
            y=y,
            X=X,
            XtX=X.T @ X,
            Xty=X.T @ y,
            y_sq_norm=float(y @ y),
            col_sq_norms=(X * X).sum(axis=0),
            column_names=names,
        )


def _is_missing(cell):
    return cell.strip().lower() in _MISSING_TOKENS


def load_csv(path, response_column, delimiter=","):
    """Parse a rectangular numeric CSV and split out the response column.

    The header row is auto-detected (any non-numeric, non-missing cell in
    the first row). ``response_column`` is a header name or a 0-based
    column index. Rows containing missing cells (empty, NA, NaN, null) are
    dropped with a warning; any other non-numeric cell is a parse error
    naming its row and column.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter) if row]
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFormatError(
                f"{path}: row {i + 1} has {len(row)} cells, expected {width}"
            )

    def numeric(cell):
        try:
            float(cell)
            return True
        except ValueError:
            return False

    has_header = any(not numeric(c) and not _is_missing(c) for c in rows[0])
    if has_header:
        header = [c.strip() for c in rows[0]]
        body = rows[1:]
    else:
        header = [f"x{j + 1}" for j in range(width)]
        body = rows

    if isinstance(response_column, str) and not response_column.lstrip("-").isdigit():
        if response_column not in header:
            raise ParameterError(
                f"response column {response_column!r} not found; "
                f"available: {header}"
            )
        resp_idx = header.index(response_column)
    else:
        resp_idx = int(response_column)
        if not -width <= resp_idx < width:
            raise ParameterError(
                f"response index {resp_idx} out of range for {width} columns"
            )
        resp_idx %= width

    values = np.empty((len(body), width))
    keep = np.ones(len(body), dtype=bool)
    offset = 2 if has_header else 1
    for i, row in enumerate(body):
        for j, cell in enumerate(row):
            if _is_missing(cell):
                keep[i] = False
                continue
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise DataFormatError(
                    f"{path}: non-numeric value {cell.strip()!r} at "
                    f"row {i + offset}, column {header[j]!r}"
                ) from None
    dropped = int((~keep).sum())
    if dropped:
        warnings.warn(
            f"{path}: dropped {dropped} row(s) with missing values",
            UserWarning,
            stacklevel=2,
        )
    values = values[keep]
    if values.shape[0] == 0:
        raise DataFormatError(f"{path}: no complete rows")
    predictor_idx = [j for j in range(width) if j != resp_idx]
    return Dataset(
        name=path.stem,
        y_raw=values[:, resp_idx].copy(),
        X_raw=values[:, predictor_idx].copy(),
        column_names=[header[j] for j in predictor_idx],
        response_name=header[resp_idx],
    )


def write_csv(dataset, path, delimiter=","):
    """Write a Dataset back to CSV; floats use repr so a reload is bit-exact."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow([dataset.response_name, *dataset.column_names])
        for yi, xi in zip(dataset.y_raw, dataset.X_raw):
            writer.writerow([repr(float(yi)), *(repr(float(v)) for v in xi)])


def _expand_interactions(X, names, rule):
    if rule == "none":
        return X, list(names)
    cols = [X[:, j] for j in range(X.shape[1])]
    out_names = list(names)
    p0 = len(cols)
    for i in range(p0):
        for j in range(i + 1, p0):
            cols.append(X[:, i] * X[:, j])
            out_names.append(f"{names[i]}*{names[j]}")
    if rule == "pairs+squares":
        for i in range(p0):
            cols.append(X[:, i] ** 2)
            out_names.append(f"{names[i]}^2")
    return np.column_stack(cols), out_names


def standardize(dataset, interactions="none"):
    """Center the response and standardize the predictors.

    ``interactions`` is one of ``none``, ``pairs`` (all products of
    distinct columns, p0*(p0-1)/2 of them) or ``pairs+squares``. Every
    retained column ends up with mean 0 and unit sample standard deviation
    (n - 1 denominator); constant columns are dropped with a warning.
    """
    if interactions not in ("none", "pairs", "pairs+squares"):
        raise ParameterError(
            f"interactions must be 'none', 'pairs' or 'pairs+squares', "
            f"got {interactions!r}"
        )
    n = dataset.n
    if n < 2:
        raise DataFormatError("standardize requires at least 2 rows")
    X, names = _expand_interactions(
        np.asarray(dataset.X_raw, dtype=float), dataset.column_names, interactions
    )
    y = np.asarray(dataset.y_raw, dtype=float)
    y_centered = y - y.mean()

    means = X.mean(axis=0)
    sds = X.std(axis=0, ddof=1)
    constant = sds <= 1e-13 * np.maximum(1.0, np.abs(means))
    if constant.any():
        dropped = [names[j] for j in np.flatnonzero(constant)]
        warnings.warn(
            f"dropped constant column(s): {', '.join(dropped)}",
            UserWarning,
            stacklevel=2,
        )
    keep = ~constant
    X_std = (X[:, keep] - means[keep]) / sds[keep]
    kept_names = [nm for nm, k in zip(names, keep) if k]
    if X_std.shape[1] == 0:
        raise DataFormatError("no usable predictor columns after standardization")
    return RegressionData.from_matrix(X_std, y_centered, kept_names)


def synth_regression(n, p, beta_true, sigma_true, design="iid-normal",
                     seed=0, rho=0.5):
    """Seed-deterministic synthetic linear-regression dataset.

    ``design`` is ``iid-normal`` or ``correlated`` (AR(1) columns with
    correlation ``rho``). y = X beta_true + sigma_true * noise.
    """
    if n < 1 or p < 1:
        raise ParameterError("n and p must be >= 1")
    beta_true = np.asarray(beta_true, dtype=float)
    if beta_true.shape != (p,):
        raise ParameterError(f"beta_true must have shape ({p},)")
    if not sigma_true > 0:
        raise ParameterError("sigma_true must be > 0")
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    if design == "iid-normal":
        X = gen.standard_normal((n, p))
    elif design == "correlated":
        if not 0 <= rho < 1:
            raise ParameterError("rho must be in [0, 1)")
        corr = rho ** np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
        X = gen.standard_normal((n, p)) @ np.linalg.cholesky(corr).T
    else:
        raise ParameterError(f"unknown design {design!r}")
    y = X @ beta_true + sigma_true * gen.standard_normal(n)
    return Dataset(
        name=f"synth-n{n}-p{p}-seed{seed}",
        y_raw=y,
        X_raw=X,
        column_names=[f"x{j + 1}" for j in range(p)],
    )
