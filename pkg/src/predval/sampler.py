"""Seeded multivariate normal sampling with a prescribed correlation matrix.

Samples are produced the classical way: draw an ``n x p`` matrix ``X`` of
independent standard normals, factor the target correlation matrix as
``sigma = A @ A.T`` and return ``Y = X @ A.T``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveSemidefinite, SizeMismatch, ValidationError

# Pivots in [-PSD_TOL, 0] count as rank deficiency, anything lower is an error.
PSD_TOL = 1e-10
# Positive pivots this small are rounding noise left by a rank-deficient block.
_ZERO_PIVOT = 1e-14
# Largest off-pivot residual tolerated in a column whose pivot was clamped.
_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one reproducible random substream.

    ``retry`` is only used by the simulation harness when a replication has
    to be redrawn; it selects a child stream that cannot collide with any
    other ``stream_index``.
    """

    master_seed: int
    stream_index: int = 0
    retry: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValidationError(f"stream_index must be nonnegative, got {self.stream_index}")
        if self.retry < 0:
            raise ValidationError(f"retry must be nonnegative, got {self.retry}")

    def generator(self) -> np.random.Generator:
        key = (self.stream_index,) if self.retry == 0 else (self.stream_index, self.retry)
        ss = np.random.SeedSequence(self.master_seed, spawn_key=key)
        return np.random.Generator(np.random.PCG64(ss))


def as_correlation_matrix(sigma) -> np.ndarray:
    """Validate ``sigma`` as a correlation matrix and return a float copy.

    Definiteness is not checked here; :func:`gram_factor` does that.
    """
    s = np.array(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] < 1:
        raise ValidationError(f"correlation matrix must be square, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise ValidationError("correlation matrix has non-finite entries")
    if not np.array_equal(s, s.T):
        raise ValidationError("correlation matrix is not symmetric")
    if not np.all(np.diag(s) == 1.0):
        raise ValidationError("correlation matrix must have a unit diagonal")
    if np.any(np.abs(s) > 1.0):
        raise ValidationError("correlations must lie in [-1, 1]")
    return s


def gram_factor(sigma) -> np.ndarray:
    """Lower-triangular ``A`` with ``A @ A.T == sigma`` (Cholesky, pivot clamped).

    Semidefinite input is accepted: a pivot in ``[-1e-10, 1e-14]`` counts as zero
    and its column is left empty (the rest of the column must vanish too).

    >>> gram_factor([[1, .6], [.6, 1]])
    array([[1. , 0. ],
           [0.6, 0.8]])
    """
    s = as_correlation_matrix(sigma)
    p = s.shape[0]
    a = np.zeros_like(s)
    for j in range(p):
        pivot = s[j, j] - a[j, :j] @ a[j, :j]
        if pivot < -PSD_TOL:
            raise NotPositiveSemidefinite(
                f"pivot {j} is {pivot:.3g}; the matrix is not positive semidefinite"
            )
        resid = s[j + 1:, j] - a[j + 1:, :j] @ a[j, :j]
        if pivot <= _ZERO_PIVOT:
            if np.any(np.abs(resid) > _RESIDUAL_TOL):
                raise NotPositiveSemidefinite(
                    f"pivot {j} vanishes but its column does not; the matrix is not positive semidefinite"
                )
            continue
        a[j, j] = np.sqrt(pivot)
        a[j + 1:, j] = resid / a[j, j]
    return a


def standard_normal_matrix(n: int, p: int, seed: SeedSpec) -> np.ndarray:
    """``n x p`` matrix of independent N(0, 1) draws from the stream ``seed``."""
    if n < 1 or p < 1:
        raise ValidationError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    return seed.generator().standard_normal((n, p))


def _sample_with_factor(a: np.ndarray, n: int, seed: SeedSpec) -> np.ndarray:
    x = standard_normal_matrix(n, a.shape[0], seed)
    return x @ a.T


def mvn_sample(sigma, n: int, seed: SeedSpec) -> np.ndarray:
    """Draw ``n`` rows from N(0, sigma)."""
    return _sample_with_factor(gram_factor(sigma), n, seed)


def split_subsamples(y: np.ndarray, nss: int, sss: int) -> list[np.ndarray]:
    """Cut ``y`` into ``nss`` consecutive blocks of ``sss`` rows."""
    y = np.asarray(y)
    if nss < 1 or sss < 1 or nss * sss != y.shape[0]:
        raise SizeMismatch(f"{nss} x {sss} = {nss * sss} does not match {y.shape[0]} rows")
    return [y[i * sss:(i + 1) * sss] for i in range(nss)]
