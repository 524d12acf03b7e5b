"""Correlation estimates, multiple correlations and the pooling estimators."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateColumn,
    DegreesOfFreedomExhausted,
    EmptyInput,
    InvalidRatio,
    LengthMismatch,
    SingularMatrix,
    ValidationError,
)

# Smallest Cholesky pivot for which a correlation matrix counts as invertible.
INVERTIBLE_TOL = 1e-10


def _corr_stack(y: np.ndarray) -> np.ndarray:
    """Pearson correlation matrices of a stack of score matrices ``(..., n, p)``."""
    n = y.shape[-2]
    if n < 3:
        raise ValidationError(f"need at least 3 observations, got {n}")
    yc = y - y.mean(axis=-2, keepdims=True)
    cov = np.swapaxes(yc, -1, -2) @ yc
    ss = np.diagonal(cov, axis1=-2, axis2=-1)
    scale = np.max(np.abs(y), axis=-2)
    if np.any(ss <= n * (1e-13 * np.where(scale > 0, scale, 1.0)) ** 2):
        raise DegenerateColumn("a column is constant; its correlations are undefined")
    d = np.sqrt(ss)
    r = cov / d[..., :, None] / d[..., None, :]
    r = 0.5 * (r + np.swapaxes(r, -1, -2))
    np.clip(r, -1.0, 1.0, out=r)
    idx = np.arange(r.shape[-1])
    r[..., idx, idx] = 1.0
    return r


def corr_matrix(y) -> np.ndarray:
    """Pearson correlation matrix of the columns of ``y``."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 2:
        raise ValidationError(f"score matrix must be 2-D, got shape {y.shape}")
    return _corr_stack(y[None])[0]


def multiple_correlations(r) -> np.ndarray:
    """Multiple correlation of every variable with all the others.

    Uses ``R_i = sqrt(1 - 1 / r^ii)`` where ``r^ii`` is the i-th diagonal
    entry of the inverse correlation matrix. Accepts a single ``(p, p)``
    matrix or a stack ``(..., p, p)``.
    """
    r = np.asarray(r, dtype=float)
    try:
        chol = np.linalg.cholesky(r)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix("correlation matrix is not invertible (collinear variables)") from exc
    pivots = np.diagonal(chol, axis1=-2, axis2=-1) ** 2
    if np.any(pivots <= INVERTIBLE_TOL):
        raise SingularMatrix("correlation matrix is not invertible (collinear variables)")
    eye = np.broadcast_to(np.eye(r.shape[-1]), r.shape)
    chol_inv = np.linalg.solve(chol, eye)
    rii = np.sum(chol_inv**2, axis=-2)
    return np.sqrt(np.clip(1.0 - 1.0 / rii, 0.0, None))


def sum_score_validity(y, criterion: int) -> float:
    """Correlation of ``criterion`` with the unweighted sum of the other columns.

    Each column is standardized with its own mean and ``n - 1`` standard
    deviation before summing.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 2 or y.shape[1] < 2:
        raise ValidationError("sum score needs a criterion and at least one predictor")
    p = y.shape[1]
    if not -p <= criterion < p:
        raise ValidationError(f"criterion {criterion} out of range for {p} variables")
    criterion %= p
    sd = y.std(axis=0, ddof=1)
    if np.any(sd == 0):
        raise DegenerateColumn("a column is constant; its correlations are undefined")
    z = (y - y.mean(axis=0)) / sd
    total = np.delete(z, criterion, axis=1).sum(axis=1)
    return float(corr_matrix(np.column_stack([total, z[:, criterion]]))[0, 1])


def sum_score_from_corr(r, criterion: int) -> np.ndarray:
    """Same quantity as :func:`sum_score_validity`, read off a correlation matrix.

    With standardized predictors the correlation of their sum with the
    criterion is ``sum_j r_cj / sqrt(sum_jl r_jl)``. ``r`` may be a stack.
    """
    r = np.asarray(r, dtype=float)
    pred = np.delete(np.arange(r.shape[-1]), criterion)
    num = r[..., criterion, pred].sum(axis=-1)
    den = r[..., pred[:, None], pred[None, :]].sum(axis=(-2, -1))
    return num / np.sqrt(den)


def pda_pool(per_subsample: Sequence, weights: Sequence | None = None) -> np.ndarray:
    """Weighted average of per-sub-sample estimates (the PDA estimator).

    >>> float(pda_pool([[.436], [.498]], [85, 49])[0])  # doctest: +ELLIPSIS
    0.4586...
    """
    if len(per_subsample) == 0:
        raise EmptyInput("nothing to pool")
    try:
        vals = np.array([np.atleast_1d(np.asarray(v, dtype=float)) for v in per_subsample])
    except ValueError as exc:
        raise LengthMismatch("sub-sample vectors differ in length") from exc
    if vals.ndim != 2:
        raise LengthMismatch("sub-sample vectors differ in length")
    if weights is None:
        return vals.mean(axis=0)
    w = np.asarray(weights, dtype=float)
    if w.shape != (vals.shape[0],):
        raise LengthMismatch(f"{w.size} weights for {vals.shape[0]} sub-samples")
    if np.any(w <= 0):
        raise ValidationError("weights must be positive")
    return (w @ vals) / w.sum()


@dataclass(frozen=True)
class DeptRecord:
    """Published statistic of one department: its size and multiple correlation."""

    n: int
    r: float

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"department size must be >= 1, got {self.n}")
        if not 0.0 <= self.r <= 1.0:
            raise ValidationError(f"multiple correlation must be in [0, 1], got {self.r}")


def pool_departments(records: Sequence[DeptRecord]) -> float:
    """Size-weighted mean of departmental correlations."""
    if not records:
        raise EmptyInput("no departments to pool")
    return float(pda_pool([[d.r] for d in records], [d.n for d in records])[0])


def bias(pop, estimate):
    """Population value minus estimate; negative means overestimation."""
    return pop - estimate


@dataclass(frozen=True)
class EstimateRecord:
    criterion_index: int
    pop: float
    pda: float
    agr: float
    sum: float

    @property
    def bias_pda(self) -> float:
        return bias(self.pop, self.pda)

    @property
    def bias_agr(self) -> float:
        return bias(self.pop, self.agr)

    @property
    def bias_sum(self) -> float:
        return bias(self.pop, self.sum)

    @property
    def diff(self) -> float:
        """How much larger the PDA bias is than the aggregate bias, in magnitude."""
        return abs(self.bias_pda) - abs(self.bias_agr)


def shrinkage_adjust(r_squared: float, n: int, k: int) -> float:
    """Wherry-adjusted R^2, ``1 - (1 - R^2)(n - 1)/(n - k - 1)``.

    Can be negative when R^2 is small relative to k / (n - 1).
    """
    if not 0.0 <= r_squared <= 1.0:
        raise ValidationError(f"R^2 must be in [0, 1], got {r_squared}")
    if k < 1:
        raise ValidationError(f"need at least one predictor, got k={k}")
    if n <= k + 1:
        raise DegreesOfFreedomExhausted(f"n={n} leaves no residual degrees of freedom for k={k}")
    return 1.0 - (1.0 - r_squared) * (n - 1) / (n - k - 1)


def range_restriction_correct(r: float, sd_ratio: float) -> float:
    """Univariate correction for direct selection on the predictor.

    ``sd_ratio`` is the unrestricted over the restricted predictor SD.
    """
    if not -1.0 < r < 1.0:
        raise ValidationError(f"correlation must be in (-1, 1), got {r}")
    if not sd_ratio > 0:
        raise InvalidRatio(f"standard-deviation ratio must be positive, got {sd_ratio}")
    return r * sd_ratio / np.sqrt(1.0 - r * r + r * r * sd_ratio * sd_ratio)
