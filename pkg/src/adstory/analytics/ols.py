"""Ordinary least squares on a named design matrix.

The solver goes through QR, never through the normal equations, so tests can
hold an independent normal-equations oracle against it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from adstory.errors import ValidationFailure


class SingularDesign(ValidationFailure):
    """The design matrix is rank-deficient."""


class Underdetermined(ValidationFailure):
    """Fewer rows than columns."""


class InsufficientData(ValidationFailure):
    """Not enough records for the requested analysis."""


@dataclass
class DesignMatrix:
    columns: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValidationFailure("design matrix must be 2-dimensional")
        if len(self.columns) != self.values.shape[1]:
            raise ValidationFailure(
                f"{len(self.columns)} column names for "
                f"{self.values.shape[1]} value columns"
            )
        if len(set(self.columns)) != len(self.columns):
            raise ValidationFailure("design matrix column names must be unique")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def column_index(self, name: str) -> int:
        return self.columns.index(name)


@dataclass
class OlsResult:
    coefs: np.ndarray
    std_errs: np.ndarray
    rss: float


def ols_fit(X: DesignMatrix | np.ndarray, y: np.ndarray) -> OlsResult:
    """Minimize ||X beta - y||^2; standard errors from sigma^2 (X'X)^-1."""
    values = X.values if isinstance(X, DesignMatrix) else np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = values.shape
    if n <= p:
        raise Underdetermined(f"n={n} rows for p={p} columns")
    if np.linalg.matrix_rank(values) < p:
        raise SingularDesign("design matrix is rank-deficient")

    q_factor, r_factor = np.linalg.qr(values)
    coefs = np.linalg.solve(r_factor, q_factor.T @ y)
    residuals = y - values @ coefs
    rss = float(residuals @ residuals)
    sigma2 = rss / (n - p)
    r_inverse = np.linalg.solve(r_factor, np.eye(p))
    covariance = sigma2 * (r_inverse @ r_inverse.T)
    return OlsResult(coefs=coefs, std_errs=np.sqrt(np.diag(covariance)), rss=rss)
