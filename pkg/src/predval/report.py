"""Markdown and CSV rendering of simulation and utility results."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import RunConfig
from .correlation import DeptRecord
from .errors import EmptyInput, ValidationError
from .pooling import ESTIMATORS, BiasTables, CellResult, ValiditySweep
from .utility import UtilityGrid, iter_rows

CSV_COLUMNS = ("cell", "nss", "sss", "replications", "criterion", "estimator",
               "estimate", "bias", "mc_se", "seed")
CONFIG_PREFIX = "# config: "


@dataclass(frozen=True)
class PoolResult:
    departments: tuple[DeptRecord, ...]
    pooled: float


def emit_table(result, fmt: str = "markdown", config: RunConfig | None = None) -> bytes:
    """Render ``result`` as UTF-8 markdown or CSV.

    With ``config`` the run configuration is embedded verbatim: as a fenced
    JSON block in markdown, as one ``# config: {...}`` line heading the CSV.
    """
    if isinstance(result, CellResult):
        result = BiasTables([result])
    if isinstance(result, BiasTables) and not result.blocks:
        raise EmptyInput("no cells to report")
    if isinstance(result, ValiditySweep) and not result.cells:
        raise EmptyInput("empty sweep")
    if isinstance(result, UtilityGrid) and not result.cells:
        raise EmptyInput("empty grid")
    if fmt == "markdown":
        renderers = {BiasTables: _md_bias, ValiditySweep: _md_sweep,
                     UtilityGrid: _md_grid, PoolResult: _md_pool}
    elif fmt == "csv":
        renderers = {BiasTables: _csv_bias, ValiditySweep: _csv_sweep,
                     UtilityGrid: _csv_grid, PoolResult: _csv_pool}
    else:
        raise ValidationError(f"unknown output format {fmt!r}")
    render = renderers.get(type(result))
    if render is None:
        raise TypeError(f"cannot render {type(result).__name__}")
    text = render(result)
    if config is not None:
        if fmt == "csv":
            text = CONFIG_PREFIX + config.to_json(indent=None) + "\n" + text
        else:
            text = "```json\n" + config.to_json() + "\n```\n\n" + text
    return text.encode("utf-8")


def embedded_config(report: bytes | str) -> str:
    """Return the config JSON embedded in a report produced by :func:`emit_table`."""
    text = report.decode("utf-8") if isinstance(report, bytes) else report
    if text.startswith(CONFIG_PREFIX):
        return text.splitlines()[0][len(CONFIG_PREFIX):]
    if text.startswith("```json\n"):
        return text[len("```json\n"):text.index("\n```")]
    raise ValueError("report carries no embedded config")


def _num(x: float) -> str:
    return f"{x:.6g}"


def _dec(x: float, nd: int = 3) -> str:
    """Journal-style decimal: no leading zero, e.g. ``.301`` and ``-.068``."""
    s = f"{x:.{nd}f}"
    if float(s) == 0.0:
        s = s.lstrip("-")
    if s.startswith("0."):
        return s[1:]
    if s.startswith("-0."):
        return "-" + s[2:]
    return s


def _md_row(cells: Sequence[str]) -> str:
    return "| " + " | ".join(cells) + " |"


def _md_matrix(sigma: np.ndarray) -> list[str]:
    p = sigma.shape[0]
    lines = [_md_row([""] + [str(j + 1) for j in range(p)]), _md_row(["---"] * (p + 1))]
    for i in range(p):
        lines.append(_md_row([str(i + 1)] + [_dec(v) if i != j else "1" for j, v in enumerate(sigma[i])]))
    return lines


def _md_bias(tables: BiasTables) -> str:
    first = tables.blocks[0].design
    crit = first.criteria
    main = crit[-1]
    out = ["## Population correlation matrix", ""] + _md_matrix(first.sigma)
    out += ["", f"## Sample multiple correlations followed by bias "
            f"(replications={first.replications}, seed={first.master_seed})", ""]
    head = ["NSS", "SSS", ""] + [str(c + 1) for c in crit] + ["diff"]
    out += [_md_row(head), _md_row(["---"] * len(head))]
    for cr in tables.blocks:
        d = cr.design
        recs = [cr.record(c) for c in crit]

        def row(label, vals, diff="", lead=("", "")):
            out.append(_md_row([*lead, label, *vals, diff]))

        row("pop", [_dec(r.pop) for r in recs], lead=(str(d.nss), str(d.sss)))
        for est in ESTIMATORS:
            row(est, [_dec(getattr(r, est)) for r in recs])
        row("pop-pda", [_dec(r.bias_pda) for r in recs])
        row("pop-agr", [_dec(r.bias_agr) for r in recs], diff=_dec(cr.record(main).diff))
        row("pop-sum", [_dec(r.bias_sum) for r in recs])
        if d.replications > 1:
            for est in ESTIMATORS:
                row(f"mc_se {est}", [_dec(cr.se(est, c), 4) for c in crit])
        else:
            row("mc_se", ["n/a"] * len(crit))
        if cr.retries:
            row("redraws", [str(cr.retries)] + [""] * (len(crit) - 1))
    return "\n".join(out) + "\n"


def _bias_rows(cr: CellResult, writer, seed: int):
    d = cr.design
    for j, c in enumerate(d.criteria):
        rec = cr.records[j]
        writer.writerow([cr.cell_ordinal, d.nss, d.sss, d.replications, c + 1, "pop",
                         _num(rec.pop), _num(0.0), _num(0.0), seed])
        for est in ESTIMATORS:
            writer.writerow([cr.cell_ordinal, d.nss, d.sss, d.replications, c + 1, est,
                             _num(getattr(rec, est)), _num(getattr(rec, f"bias_{est}")),
                             _num(cr.mc_se[est][j]), seed])


def _csv_bias(tables: BiasTables) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for cr in sorted(tables.blocks, key=lambda c: c.cell_ordinal):
        _bias_rows(cr, w, cr.design.master_seed)
    return buf.getvalue()


def _csv_sweep(sweep: ValiditySweep) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in sweep.cells:
        for cr in row:
            _bias_rows(cr, w, cr.design.master_seed)
    return buf.getvalue()


def _md_sweep(sweep: ValiditySweep) -> str:
    out = [f"## Population correlation matrices (r12 = {_dec(sweep.r12)})", ""]
    head = ["v1", "v2", "validity"]
    out += [_md_row(head), _md_row(["---"] * 3)]
    for (v1, v2), pop in zip(sweep.validities, sweep.population):
        out.append(_md_row([_dec(v1), _dec(v2), _dec(pop)]))
    reps = sweep.cells[0][0].design.replications
    seed = sweep.cells[0][0].design.master_seed
    out += ["", f"## Bias, row/column means of magnitude (replications={reps}, seed={seed})", ""]
    out.append(_md_row(["Pop. validity", "NSS"] + [str(n) for n, _ in sweep.shapes] + ["", ""]))
    out.append(_md_row(["---"] * (len(sweep.shapes) + 4)))
    out.append(_md_row(["", "SSS"] + [str(s) for _, s in sweep.shapes] + ["rmns", "diff"]))
    for v, row in enumerate(sweep.cells):
        for e, est in enumerate(ESTIMATORS):
            label = _dec(sweep.population[v]) if e == 1 else ""
            vals = [_dec(getattr(cr.records[0], f"bias_{est}")) for cr in row]
            diff = _dec(sweep.diff[v]) if e == 1 else ""
            out.append(_md_row([label, est, *vals, _dec(sweep.row_means[v, e]), diff]))
    out.append(_md_row(["", "cmns", *[_dec(m) for m in sweep.col_means], _dec(sweep.grand_mean), ""]))
    return "\n".join(out) + "\n"


def _md_grid(grid: UtilityGrid) -> str:
    if len(grid.cells) == 1:
        return _md_single(grid)
    out = ["## Gains (losses, if negative) in correct classifications relative to random admission", ""]
    head = ["b+", "q"]
    for r in grid.validities:
        head += [f"%C (r={_dec(r, 2)})", "G/L", "HR"]
    out += [_md_row(head), _md_row(["---"] * len(head))]
    last_b = None
    for b, q, cells in iter_rows(grid):
        lead = [str(round(100 * b)) if b != last_b else "", str(round(100 * q))]
        last_b = b
        vals = []
        for c in cells:
            vals += [str(c.pct_correct), str(c.gain_loss), str(c.hit_rate)]
        out.append(_md_row(lead + vals))
    out += ["", "Entries are percentages."]
    return "\n".join(out) + "\n"


def _md_single(grid: UtilityGrid) -> str:
    c = grid.cells[0]
    t, u = c.table, c.report
    out = [f"## Fourfold table (validity {_dec(c.validity, 2)}, base rate {_dec(c.base_rate, 2)}, "
           f"quota {_dec(c.quota, 2)})", ""]
    out += [_md_row(["test", "criterion -", "criterion +", "sum"]), _md_row(["---"] * 4)]
    out.append(_md_row(["+", _dec(t.fp), _dec(t.tp), _dec(t.quota)]))
    out.append(_md_row(["-", _dec(t.tn), _dec(t.fn), _dec(1 - t.quota)]))
    out.append(_md_row(["sum", _dec(t.negative_base_rate), _dec(t.base_rate), "1"]))
    out += ["", _md_row(["prc", "gain", "hit rate"]), _md_row(["---"] * 3),
            _md_row([_dec(u.prc), _dec(u.gain), _dec(u.hit_rate)])]
    return "\n".join(out) + "\n"


def _csv_grid(grid: UtilityGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["validity", "base_rate", "quota", "tp", "fp", "fn", "tn", "prc", "gain",
                "hit_rate", "pct_correct", "gain_loss", "hit_rate_pct"])
    for c in grid.cells:
        t, u = c.table, c.report
        w.writerow([_num(c.validity), _num(c.base_rate), _num(c.quota), _num(t.tp), _num(t.fp),
                    _num(t.fn), _num(t.tn), _num(u.prc), _num(u.gain), _num(u.hit_rate),
                    c.pct_correct, c.gain_loss, c.hit_rate])
    return buf.getvalue()


def _md_pool(res: PoolResult) -> str:
    out = ["## Size-weighted pooling of reported correlations", "",
           _md_row(["department", "n", "R"]), _md_row(["---"] * 3)]
    for i, d in enumerate(res.departments, 1):
        out.append(_md_row([str(i), str(d.n), _dec(d.r)]))
    total = sum(d.n for d in res.departments)
    out.append(_md_row(["pooled", str(total), _dec(res.pooled)]))
    return "\n".join(out) + "\n"


def _csv_pool(res: PoolResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["department", "n", "r"])
    for i, d in enumerate(res.departments, 1):
        w.writerow([i, d.n, _num(d.r)])
    w.writerow(["pooled", sum(d.n for d in res.departments), _num(res.pooled)])
    return buf.getvalue()
