"""Run configuration for the command-line front end.

Configs are JSON objects. Unknown keys, and keys that do not apply to the
chosen command, are rejected. Variable indices (``criteria``) are 1-based as
in printed tables.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Any

from .errors import PredvalError, ParseError, ValidationError
from .pooling import DEFAULT_CELLS, DEFAULT_SEED, TABLE2_SIGMA, TABLE4_VALIDITIES, SimDesign
from .sampler import gram_factor

COMMANDS = ("simulate", "sweep", "classify", "pool")
FORMATS = ("markdown", "csv")
DEFAULT_REPLICATIONS = 1000

_COMMON = {"command", "seed", "replications", "format", "out"}
_ALLOWED = {
    "simulate": _COMMON | {"sigma", "cells", "criteria", "nss", "sss"},
    "sweep": _COMMON | {"r12", "validities", "cells"},
    "classify": {"command", "format", "out", "validity", "base_rate", "quota"},
    "pool": {"command", "format", "out", "departments"},
}
_TABLE5B = {
    "validity": (0.50, 0.30, 0.15),
    "base_rate": (0.50, 0.55, 0.60, 0.65, 0.70),
    "quota": (0.70, 0.60, 0.50, 0.40, 0.30),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int | None = None
    replications: int | None = None
    format: str = "markdown"
    out: str | None = None
    sigma: tuple[tuple[float, ...], ...] | None = None
    cells: tuple[tuple[int, int], ...] | None = None
    criteria: tuple[int, ...] | None = None
    r12: float | None = None
    validities: tuple[tuple[float, float], ...] | None = None
    validity: tuple[float, ...] | None = None
    base_rate: tuple[float, ...] | None = None
    quota: tuple[float, ...] | None = None
    departments: tuple[tuple[int, float], ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {f.name: _plain(getattr(self, f.name)) for f in fields(self)
                if getattr(self, f.name) is not None}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def replace(self, **changes) -> "RunConfig":
        """Copy with ``changes`` applied (``None`` values ignored), re-validated."""
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return from_dict(data)


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


def parse_config(source: str) -> RunConfig:
    """Parse and validate JSON config text."""
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("line 1: config must be a JSON object")
    return from_dict(data)


def from_dict(data: dict[str, Any]) -> RunConfig:
    command = data.get("command")
    if command not in COMMANDS:
        raise ValidationError(f"command: must be one of {', '.join(COMMANDS)}, got {command!r}")
    unknown = sorted(set(data) - _ALLOWED[command])
    if unknown:
        raise ValidationError(f"{', '.join(unknown)}: not a valid field for {command!r}")
    fmt = data.get("format", "markdown")
    if fmt not in FORMATS:
        raise ValidationError(f"format: must be one of {', '.join(FORMATS)}, got {fmt!r}")
    out = data.get("out")
    if out is not None and not isinstance(out, str):
        raise ValidationError("out: must be a path string")
    kw: dict[str, Any] = {"command": command, "format": fmt, "out": out}
    if command in ("simulate", "sweep"):
        kw["seed"] = _int(data, "seed", DEFAULT_SEED, lo=0, hi=2**64 - 1)
        kw["replications"] = _int(data, "replications", DEFAULT_REPLICATIONS, lo=1)
        if "nss" in data or "sss" in data:
            if "cells" in data:
                raise ValidationError("cells: give either cells or nss/sss, not both")
            kw["cells"] = _cells([[_int(data, "nss", None), _int(data, "sss", None)]])
        else:
            kw["cells"] = _cells(data.get("cells", DEFAULT_CELLS))
    if command == "simulate":
        kw.update(_simulate_fields(data, kw))
    elif command == "sweep":
        kw.update(_sweep_fields(data, kw))
    elif command == "classify":
        for name, default in _TABLE5B.items():
            kw[name] = _rates(data.get(name, default), name)
    else:
        kw["departments"] = _departments(data.get("departments"))
    return RunConfig(**kw)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _int(data, name, default, lo=None, hi=None) -> int:
    v = data.get(name, default)
    if not _is_int(v):
        raise ValidationError(f"{name}: must be an integer, got {v!r}")
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise ValidationError(f"{name}: {v} out of range [{lo}, {hi if hi is not None else 'inf'}]")
    return v


def _cells(v) -> tuple[tuple[int, int], ...]:
    if not isinstance(v, (list, tuple)) or not v:
        raise ValidationError("cells: must be a nonempty list of [nss, sss] pairs")
    out = []
    for c in v:
        if not (isinstance(c, (list, tuple)) and len(c) == 2 and all(_is_int(x) and x >= 1 for x in c)):
            raise ValidationError(f"cells: entry {c!r} is not a pair of positive integers")
        out.append((int(c[0]), int(c[1])))
    return tuple(out)


def _simulate_fields(data, kw) -> dict[str, Any]:
    raw = data.get("sigma", TABLE2_SIGMA)
    if not (isinstance(raw, (list, tuple)) and all(isinstance(r, (list, tuple)) for r in raw)
            and all(_is_num(x) for r in raw for x in r)):
        raise ValidationError("sigma: must be a square matrix of numbers")
    sigma = tuple(tuple(float(x) for x in row) for row in raw)
    p = len(sigma)
    crit = data.get("criteria", list(range(1, p + 1)))
    if not (isinstance(crit, (list, tuple)) and crit and all(_is_int(c) for c in crit)):
        raise ValidationError("criteria: must be a nonempty list of 1-based variable indices")
    crit = tuple(int(c) for c in crit)
    try:
        gram_factor(sigma)
        for nss, sss in kw["cells"]:
            SimDesign(sigma, nss, sss, kw["replications"], kw["seed"], tuple(c - 1 for c in crit))
    except PredvalError as exc:
        raise ValidationError(f"simulate: {type(exc).__name__}: {exc}") from exc
    return {"sigma": sigma, "criteria": crit}


def _sweep_fields(data, kw) -> dict[str, Any]:
    r12 = data.get("r12", 0.6)
    if not _is_num(r12) or not -1 < r12 < 1:
        raise ValidationError(f"r12: must be a number in (-1, 1), got {r12!r}")
    raw = data.get("validities", TABLE4_VALIDITIES)
    if not (isinstance(raw, (list, tuple)) and raw and all(
            isinstance(v, (list, tuple)) and len(v) == 2 and all(_is_num(x) for x in v) for v in raw)):
        raise ValidationError("validities: must be a nonempty list of [v1, v2] pairs")
    vals = tuple((float(a), float(b)) for a, b in raw)
    try:
        for v1, v2 in vals:
            sigma = ((1, r12, v1), (r12, 1, v2), (v1, v2, 1))
            gram_factor(sigma)
            for nss, sss in kw["cells"]:
                SimDesign(sigma, nss, sss, kw["replications"], kw["seed"], (2,))
    except PredvalError as exc:
        raise ValidationError(f"sweep: {type(exc).__name__}: {exc}") from exc
    return {"r12": float(r12), "validities": vals}


def _rates(v, name) -> tuple[float, ...]:
    vals = v if isinstance(v, (list, tuple)) else [v]
    if not vals or not all(_is_num(x) for x in vals):
        raise ValidationError(f"{name}: must be a number or a nonempty list of numbers")
    lo_open = name != "validity"
    for x in vals:
        ok = (0 < x < 1) if lo_open else (-1 <= x <= 1)
        if not ok:
            rng = "(0, 1)" if lo_open else "[-1, 1]"
            raise ValidationError(f"{name}: {x} outside {rng}")
    return tuple(float(x) for x in vals)


def _departments(v) -> tuple[tuple[int, float], ...]:
    if not isinstance(v, (list, tuple)) or not v:
        raise ValidationError("departments: must be a nonempty list of [n, r] pairs")
    out = []
    for d in v:
        if not (isinstance(d, (list, tuple)) and len(d) == 2 and _is_int(d[0]) and d[0] >= 1
                and _is_num(d[1]) and 0 <= d[1] <= 1):
            raise ValidationError(f"departments: entry {d!r} is not [n >= 1, 0 <= r <= 1]")
        out.append((int(d[0]), float(d[1])))
    return tuple(out)
