"""Monte Carlo harness comparing pooled sub-sample estimates with aggregation.

One *cell* draws ``nss * sss`` observations from N(0, sigma), cuts them into
``nss`` sub-samples and estimates the multiple correlation of each criterion
three ways:

``pda``
    average of the within-sub-sample multiple correlations,
``agr``
    multiple correlation of the aggregated total sample,
``sum``
    correlation of the criterion with the unweighted sum of the
    standardized predictors in the total sample.

Each cell is repeated ``replications`` times on independent substreams.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate, stats

from .correlation import (
    EstimateRecord,
    _corr_stack,
    multiple_correlations,
    sum_score_from_corr,
)
from .errors import EmptyInput, SingularMatrix, SingularSubsample, ValidationError
from .sampler import SeedSpec, _sample_with_factor, as_correlation_matrix, gram_factor

ESTIMATORS = ("pda", "agr", "sum")
DEFAULT_SEED = 20090215
# Redraw attempts allowed per replication before giving up on a design.
MAX_RETRIES = 100

TABLE2_SIGMA = ((1.0, 0.6, 0.2), (0.6, 1.0, 0.3), (0.2, 0.3, 1.0))
TABLE3_SIGMA = ((1.0, 0.6, 0.0), (0.6, 1.0, 0.0), (0.0, 0.0, 1.0))
TABLE4_VALIDITIES = ((0.0, 0.0), (0.1, 0.1), (0.1, 0.2), (0.2, 0.3), (0.4, 0.2))
DEFAULT_CELLS = ((40, 25), (20, 50), (13, 77))


def two_predictor_sigma(r12: float, v1: float, v2: float) -> np.ndarray:
    """Correlation matrix of two predictors (r12) and a criterion (v1, v2)."""
    return np.array([[1.0, r12, v1], [r12, 1.0, v2], [v1, v2, 1.0]])


@dataclass(frozen=True, eq=False)
class SimDesign:
    sigma: np.ndarray
    nss: int
    sss: int
    replications: int = 1000
    master_seed: int = DEFAULT_SEED
    criteria: tuple[int, ...] | None = None

    def __post_init__(self):
        sigma = as_correlation_matrix(self.sigma)
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        p = sigma.shape[0]
        if p < 2:
            raise ValidationError("need at least two variables")
        if self.nss < 1:
            raise ValidationError(f"nss must be >= 1, got {self.nss}")
        if self.sss < p + 2:
            raise ValidationError(f"sss must be >= p + 2 = {p + 2}, got {self.sss}")
        if self.replications < 1:
            raise ValidationError(f"replications must be >= 1, got {self.replications}")
        SeedSpec(self.master_seed)  # range check
        crit = tuple(range(p)) if self.criteria is None else tuple(int(c) for c in self.criteria)
        if not crit:
            raise ValidationError("criteria must be nonempty")
        if any(not 0 <= c < p for c in crit):
            raise ValidationError(f"criteria {crit} out of range for {p} variables")
        object.__setattr__(self, "criteria", crit)

    @property
    def p(self) -> int:
        return self.sigma.shape[0]

    @property
    def sst(self) -> int:
        return self.nss * self.sss


@dataclass(eq=False)
class CellResult:
    """Replication-averaged estimates for one design.

    ``draws[est]`` holds the per-replication estimates, shape
    ``(replications, len(criteria))``; ``mc_se[est]`` is their standard error
    of the mean (zero when there is only one replication).
    """

    design: SimDesign
    cell_ordinal: int
    records: list[EstimateRecord]
    draws: dict[str, np.ndarray]
    mc_se: dict[str, np.ndarray]
    retries: int = 0

    def record(self, criterion: int) -> EstimateRecord:
        for rec in self.records:
            if rec.criterion_index == criterion:
                return rec
        raise KeyError(criterion)

    def se(self, estimator: str, criterion: int) -> float:
        return float(self.mc_se[estimator][self.design.criteria.index(criterion)])


def _replicate(a: np.ndarray, design: SimDesign, seed: SeedSpec):
    y = _sample_with_factor(a, design.sst, seed)
    sub = y.reshape(design.nss, design.sss, design.p)
    try:
        pda = multiple_correlations(_corr_stack(sub)).mean(axis=0)
    except SingularMatrix as exc:
        raise SingularSubsample(str(exc)) from exc
    total = _corr_stack(y[None])
    agr = multiple_correlations(total)[0]
    crit = list(design.criteria)
    sums = [sum_score_from_corr(total[0], c) for c in crit]
    return pda[crit], agr[crit], np.array(sums)


def run_cell(design: SimDesign, cell_ordinal: int = 0) -> CellResult:
    """Run every replication of ``design``.

    Replication ``r`` uses stream ``cell_ordinal * replications + r``. A
    replication with a singular sub-sample is redrawn from a child stream of
    the same index; the number of redraws is kept in ``retries``.
    """
    a = gram_factor(design.sigma)
    pop = multiple_correlations(design.sigma)
    reps = design.replications
    k = len(design.criteria)
    draws = {est: np.empty((reps, k)) for est in ESTIMATORS}
    retries = 0
    for rep in range(reps):
        stream = cell_ordinal * reps + rep
        for attempt in range(MAX_RETRIES + 1):
            try:
                out = _replicate(a, design, SeedSpec(design.master_seed, stream, attempt))
                break
            except SingularMatrix:
                retries += 1
        else:
            raise SingularSubsample(
                f"replication {rep} stayed singular after {MAX_RETRIES} redraws; "
                "sigma is probably singular"
            )
        for est, vals in zip(ESTIMATORS, out):
            draws[est][rep] = vals
    means = {est: draws[est].mean(axis=0) for est in ESTIMATORS}
    if reps > 1:
        mc_se = {est: draws[est].std(axis=0, ddof=1) / np.sqrt(reps) for est in ESTIMATORS}
    else:
        mc_se = {est: np.zeros(k) for est in ESTIMATORS}
    records = [
        EstimateRecord(
            criterion_index=c,
            pop=float(pop[c]),
            pda=float(means["pda"][j]),
            agr=float(means["agr"][j]),
            sum=float(means["sum"][j]),
        )
        for j, c in enumerate(design.criteria)
    ]
    return CellResult(design, cell_ordinal, records, draws, mc_se, retries)


def _run_many(designs: Sequence[SimDesign], workers: int) -> list[CellResult]:
    jobs = list(enumerate(designs))
    if workers <= 1:
        return [run_cell(d, i) for i, d in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: run_cell(job[1], job[0]), jobs))


@dataclass(eq=False)
class BiasTables:
    """Blocks of a bias table, ordered by increasing sub-sample size."""

    blocks: list[CellResult]

    @property
    def sigma(self) -> np.ndarray:
        return self.blocks[0].design.sigma


def reproduce_bias_tables(designs: Sequence[SimDesign], workers: int = 1) -> BiasTables:
    """Run a set of cells sharing one population matrix."""
    if not designs:
        raise EmptyInput("no designs given")
    sigma = designs[0].sigma
    if any(not np.array_equal(d.sigma, sigma) for d in designs):
        raise ValidationError("all designs in one table must share the population matrix")
    results = _run_many(designs, workers)
    results.sort(key=lambda cr: (cr.design.sss, cr.cell_ordinal))
    return BiasTables(results)


@dataclass(eq=False)
class ValiditySweep:
    """Bias of the three estimators over validity levels and cell shapes.

    ``cells[v][c]`` is the result for validity pair ``v`` and cell shape
    ``c``. ``row_means[v, e]`` is the mean absolute bias of estimator ``e``
    over cell shapes; ``col_means[c]`` the mean absolute bias over all
    validities and estimators.
    """

    validities: list[tuple[float, float]]
    r12: float
    shapes: list[tuple[int, int]]
    cells: list[list[CellResult]]
    population: np.ndarray
    row_means: np.ndarray
    col_means: np.ndarray
    grand_mean: float
    diff: np.ndarray = field(init=False)

    def __post_init__(self):
        self.diff = self.row_means[:, 0] - self.row_means[:, 1]

    def abs_bias(self) -> np.ndarray:
        """Array ``(validity, estimator, cell)`` of absolute biases."""
        return _abs_bias_grid(self.cells)


def _abs_bias_grid(cells: list[list[CellResult]]) -> np.ndarray:
    out = np.empty((len(cells), len(ESTIMATORS), len(cells[0])))
    for v, row in enumerate(cells):
        for c, cr in enumerate(row):
            rec = cr.records[0]
            out[v, :, c] = [abs(rec.bias_pda), abs(rec.bias_agr), abs(rec.bias_sum)]
    return out


def validity_sweep(
    validities: Sequence[tuple[float, float]] = TABLE4_VALIDITIES,
    r12: float = 0.6,
    cells: Sequence[tuple[int, int]] = DEFAULT_CELLS,
    replications: int = 1000,
    master_seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> ValiditySweep:
    """Bias of pda/agr/sum across criterion validities, third variable as criterion."""
    if not validities or not cells:
        raise EmptyInput("need at least one validity pair and one cell")
    designs = [
        SimDesign(two_predictor_sigma(r12, v1, v2), nss, sss, replications, master_seed, (2,))
        for v1, v2 in validities
        for nss, sss in cells
    ]
    flat = _run_many(designs, workers)
    nc = len(cells)
    grid = [flat[i * nc:(i + 1) * nc] for i in range(len(validities))]
    absb = _abs_bias_grid(grid)
    col_means = absb.mean(axis=(0, 1))
    return ValiditySweep(
        validities=[tuple(v) for v in validities],
        r12=r12,
        shapes=[tuple(c) for c in cells],
        cells=grid,
        population=np.array([row[0].records[0].pop for row in grid]),
        row_means=absb.mean(axis=2),
        col_means=col_means,
        grand_mean=float(col_means.mean()),
    )


def expected_null_r(n: int, k: int) -> float:
    """E[R] of the sample multiple correlation when the population value is 0.

    Under the null, R^2 ~ Beta(k/2, (n-k-1)/2); the mean of its square root is
    found by numerical integration.
    """
    if n <= k + 1:
        raise ValidationError(f"n={n} too small for k={k} predictors")
    dist = stats.beta(k / 2, (n - k - 1) / 2)
    val, _ = integrate.quad(lambda b: np.sqrt(b) * dist.pdf(b), 0.0, 1.0, limit=200)
    return float(val)
