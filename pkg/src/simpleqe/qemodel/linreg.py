"""Least-squares linear regression over the five features."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ValidationError
from ..features.extract import FeatureVector

RIDGE_PENALTY = 1e-8
MIN_EXAMPLES = 6


@dataclass(frozen=True)
class LinRegWeights:
    coef: np.ndarray
    intercept: float
    ridge: bool = False


def _as_matrix(X) -> np.ndarray:
    if len(X) and isinstance(X[0], FeatureVector):
        return np.stack([x.as_array() for x in X])
    return np.asarray(X, dtype=np.float64)


def linreg_fit(X: Sequence[FeatureVector] | np.ndarray, y: Sequence[float]) -> LinRegWeights:
    """OLS on centered data via QR; falls back to ridge (penalty 1e-8) when
    the centered design is rank deficient."""
    A = _as_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != y.shape[0]:
        raise ValidationError(f"size mismatch: X has {A.shape[0] if A.ndim else 0} rows, y has {len(y)}")
    if A.shape[0] < MIN_EXAMPLES:
        raise ValidationError(f"linreg_fit needs at least {MIN_EXAMPLES} examples, got {A.shape[0]}")
    x_mean = A.mean(axis=0)
    y_mean = y.mean()
    Ac = A - x_mean
    yc = y - y_mean
    Q, R = np.linalg.qr(Ac)
    diag = np.abs(np.diag(R))
    tol = max(Ac.shape) * np.finfo(float).eps * (diag.max() if diag.size else 0.0)
    ridge = diag.size == 0 or diag.min() <= tol
    if ridge:
        coef = np.linalg.solve(Ac.T @ Ac + RIDGE_PENALTY * np.eye(A.shape[1]), Ac.T @ yc)
    else:
        coef = np.linalg.solve(R, Q.T @ yc)
    return LinRegWeights(coef, float(y_mean - x_mean @ coef), ridge)


def linreg_predict(weights: LinRegWeights, x: FeatureVector | np.ndarray) -> float | np.ndarray:
    arr = x.as_array() if isinstance(x, FeatureVector) else np.asarray(x, dtype=np.float64)
    out = arr @ weights.coef + weights.intercept
    return float(out) if np.ndim(out) == 0 else out
