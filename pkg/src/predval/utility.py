"""Classification-rate view of test utility.

A test with validity ``r`` (the correlation of the latent bivariate normal
behind test score and criterion) is cut at a threshold admitting a fraction
``quota`` of applicants; the criterion is cut so that a fraction
``base_rate`` would succeed. The resulting 2x2 table of joint proportions
gives the proportion of correct decisions, the gain over random admission
and the hit rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from scipy.special import ndtri

from .bivariate import binorm_upper
from .errors import DegenerateRate, ValidationError, ZeroBaseRate

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class FourfoldTable:
    """Joint proportions of (test decision, criterion outcome)."""

    tp: float
    fp: float
    fn: float
    tn: float

    def __post_init__(self):
        cells = (self.tp, self.fp, self.fn, self.tn)
        if any(c < -_SUM_TOL or c > 1 + _SUM_TOL for c in cells):
            raise ValidationError(f"cell proportions must lie in [0, 1], got {cells}")
        if abs(sum(cells) - 1.0) > _SUM_TOL:
            raise ValidationError(f"cell proportions must sum to 1, got {sum(cells)}")

    @property
    def quota(self) -> float:
        return self.tp + self.fp

    @property
    def base_rate(self) -> float:
        """Positive base rate b+."""
        return self.tp + self.fn

    @property
    def negative_base_rate(self) -> float:
        return self.fp + self.tn


@dataclass(frozen=True)
class UtilityReport:
    prc: float
    gain: float
    hit_rate: float


def fourfold_from(validity: float, base_rate: float, quota: float) -> FourfoldTable:
    if not -1.0 <= validity <= 1.0:
        raise ValidationError(f"validity must be in [-1, 1], got {validity}")
    for name, v in (("base_rate", base_rate), ("quota", quota)):
        if not 0.0 < v < 1.0:
            raise DegenerateRate(f"{name} must lie strictly between 0 and 1, got {v}")
    if validity == 0.0:
        tp = quota * base_rate
    else:
        tp = binorm_upper(-ndtri(quota), -ndtri(base_rate), validity)
    fp = max(quota - tp, 0.0)
    fn = max(base_rate - tp, 0.0)
    tn = max(1.0 - quota - base_rate + tp, 0.0)
    return FourfoldTable(tp, fp, fn, tn)


def utility(t: FourfoldTable) -> UtilityReport:
    b_pos = t.base_rate
    if b_pos <= 0.0:
        raise ZeroBaseRate("hit rate is undefined when nobody qualifies")
    prc = t.tp + t.tn
    return UtilityReport(
        prc=prc,
        gain=prc - max(b_pos, t.negative_base_rate),
        hit_rate=t.tp / b_pos,
    )


def percent(x: float) -> int:
    """Round ``100 * x`` to the nearest integer, halves away from zero."""
    v = 100.0 * x
    return int(math.copysign(math.floor(abs(v) + 0.5), v))


@dataclass(frozen=True)
class GridCell:
    validity: float
    base_rate: float
    quota: float
    table: FourfoldTable
    report: UtilityReport

    @property
    def pct_correct(self) -> int:
        return percent(self.report.prc)

    @property
    def gain_loss(self) -> int:
        return percent(self.report.gain)

    @property
    def hit_rate(self) -> int:
        return percent(self.report.hit_rate)

    @property
    def key(self) -> tuple[int, int, int]:
        """(b+, q, r) as integer percentages."""
        return percent(self.base_rate), percent(self.quota), percent(self.validity)


@dataclass(frozen=True)
class UtilityGrid:
    validities: tuple[float, ...]
    base_rates: tuple[float, ...]
    quotas: tuple[float, ...]
    cells: tuple[GridCell, ...]

    def cell(self, validity: float, base_rate: float, quota: float) -> GridCell:
        for c in self.cells:
            if (math.isclose(c.validity, validity) and math.isclose(c.base_rate, base_rate)
                    and math.isclose(c.quota, quota)):
                return c
        raise KeyError((validity, base_rate, quota))


def table5b(
    validities: Sequence[float] = (0.50, 0.30, 0.15),
    base_rates: Sequence[float] = (0.50, 0.55, 0.60, 0.65, 0.70),
    quotas: Sequence[float] = (0.70, 0.60, 0.50, 0.40, 0.30),
) -> UtilityGrid:
    """Percent correct, gain/loss and hit rate over a (b+, q, r) grid.

    Cells are ordered by base rate, then quota, then validity.
    """
    cells = []
    for b in base_rates:
        for q in quotas:
            for r in validities:
                t = fourfold_from(r, b, q)
                cells.append(GridCell(r, b, q, t, utility(t)))
    return UtilityGrid(tuple(validities), tuple(base_rates), tuple(quotas), tuple(cells))


@dataclass(frozen=True)
class Discrepancy:
    key: tuple[int, int, int]
    computed: tuple[int, int, int]
    reference: tuple[int, int, int]


def compare_grid(grid: UtilityGrid, reference: Mapping[tuple[int, int, int], tuple[int, int, int]],
                 tol: int = 1) -> list[Discrepancy]:
    """Cells whose (%C, G/L, HR) differ from ``reference`` by more than ``tol`` points.

    ``reference`` maps ``(b+, q, r)`` integer percentages to a triple.
    """
    out = []
    for c in grid.cells:
        if c.key not in reference:
            continue
        got = (c.pct_correct, c.gain_loss, c.hit_rate)
        want = tuple(reference[c.key])
        if any(abs(g - w) > tol for g, w in zip(got, want)):
            out.append(Discrepancy(c.key, got, want))
    return out


def iter_rows(grid: UtilityGrid) -> Iterable[tuple[float, float, list[GridCell]]]:
    """Yield ``(b+, q, cells across validities)`` in grid order."""
    nv = len(grid.validities)
    for i in range(0, len(grid.cells), nv):
        row = list(grid.cells[i:i + nv])
        yield row[0].base_rate, row[0].quota, row
