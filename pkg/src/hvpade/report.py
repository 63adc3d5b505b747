"""Sweeps over (n, lambda) grids and their table/CSV rendering."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

from . import arith
from .arith import DomainError, EXACT, FLOAT
from .oracle import converged_energy, rspt_coefficients
from .pade import (
    DEFAULT_POLE_THRESHOLD,
    DefectiveApproximant,
    PoleAtEvaluationPoint,
    build_pade,
    evaluate_pade,
)
from .series import ModelSpec, compute_series, eq13_reference, partial_sum

OK = "ok"
DEFECTIVE = "defective"
POLE = "pole-contaminated"
FLAGS = (OK, DEFECTIVE, POLE)

ORACLES = ("off", "variational", "rspt", "both")
FORMATS = ("table", "csv")
PRECISIONS = {"rational": EXACT, "float": FLOAT}

#: plateau tolerance for the diagonalization oracle inside sweeps
ORACLE_TOL = 1e-9
#: relative agreement demanded between matrix RSPT and the recurrence (oracle = both)
RSPT_AGREEMENT = 1e-8


class ConfigError(ValueError):
    def __init__(self, key: str, line: int | None, message: str):
        where = f"line {line}" if line is not None else "command line"
        super().__init__(f"{key} ({where}): {message}")
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SweepConfig:
    omega: str = "1"
    states: tuple = (0, 1, 2, 3, 4, 5)
    lambdas: tuple = (0.005, 0.01, 0.05, 0.1)
    order: int = 8
    pade_orders: tuple = ((3, 3), (3, 4))
    cubic_switch: int = 1
    oracle: str = "variational"
    output_format: str = "table"
    pole_threshold: float = DEFAULT_POLE_THRESHOLD
    precision: str = "rational"

    @property
    def arithmetic_mode(self) -> str:
        return PRECISIONS[self.precision]

    def model(self, n: int) -> ModelSpec:
        return ModelSpec(self.omega, n, self.cubic_switch, self.order, self.arithmetic_mode)


def _parse_list(raw: str, item, key: str, line):
    parts = [p.strip() for p in raw.split(",")]
    if not raw.strip() or any(not p for p in parts):
        raise ConfigError(key, line, f"expected a non-empty comma-separated list, got {raw!r}")
    try:
        return tuple(item(p) for p in parts)
    except (ValueError, ArithmeticError) as exc:
        raise ConfigError(key, line, str(exc)) from None


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise ValueError(f"{text} is negative")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise ValueError(f"{text} is not a finite non-negative number")
    return v


def _pade_pair(text: str) -> tuple[int, int]:
    left, sep, right = text.partition(":")
    if not sep:
        raise ValueError(f"Padé order {text!r} is not of the form N:M")
    return _nonneg_int(left.strip()), _nonneg_int(right.strip())


def _choice(raw: str, options, key, line) -> str:
    v = raw.strip().lower()
    if v not in options:
        raise ConfigError(key, line, f"expected one of {', '.join(options)}, got {raw!r}")
    return v


def _convert_value(key: str, raw: str, line):
    raw = raw.strip()
    if key == "omega":
        try:
            w = arith.to_mpf(raw)
        except (ValueError, ArithmeticError, TypeError):
            raise ConfigError(key, line, f"not a number: {raw!r}") from None
        if not w > 0:
            raise ConfigError(key, line, "must be positive")
        return raw
    if key == "states":
        return _parse_list(raw, _nonneg_int, key, line)
    if key == "lambdas":
        return _parse_list(raw, _nonneg_float, key, line)
    if key == "pade":
        return _parse_list(raw, _pade_pair, key, line)
    if key == "order":
        try:
            K = int(raw)
        except ValueError:
            raise ConfigError(key, line, f"not an integer: {raw!r}") from None
        if K < 1:
            raise ConfigError(key, line, "must be at least 1")
        return K
    if key == "cubic":
        v = raw.lower()
        if v in ("on", "1", "true", "yes"):
            return 1
        if v in ("off", "0", "false", "no"):
            return 0
        raise ConfigError(key, line, f"expected on or off, got {raw!r}")
    if key == "oracle":
        return _choice(raw, ORACLES, key, line)
    if key == "format":
        return _choice(raw, FORMATS, key, line)
    if key == "precision":
        return _choice(raw, tuple(PRECISIONS), key, line)
    if key == "pole_threshold":
        try:
            v = float(raw)
        except ValueError:
            raise ConfigError(key, line, f"not a number: {raw!r}") from None
        if not v > 0:
            raise ConfigError(key, line, "must be positive")
        return v
    raise ConfigError(key, line, "unknown key")


_FIELD = {
    "omega": "omega",
    "states": "states",
    "lambdas": "lambdas",
    "order": "order",
    "pade": "pade_orders",
    "cubic": "cubic_switch",
    "oracle": "oracle",
    "format": "output_format",
    "pole_threshold": "pole_threshold",
    "precision": "precision",
}
CONFIG_KEYS = tuple(_FIELD)


def config_from_items(items, base: SweepConfig | None = None) -> SweepConfig:
    """Build a config from ``(key, raw_value, line)`` triples over ``base``."""
    values = dict(vars(base or SweepConfig()))
    lines: dict[str, int | None] = {}
    for key, raw, line in items:
        if key not in _FIELD:
            raise ConfigError(key, line, "unknown key")
        values[_FIELD[key]] = _convert_value(key, raw, line)
        lines[key] = line
    cfg = SweepConfig(**values)
    need = max(N + M for N, M in cfg.pade_orders)
    if cfg.order < need:
        key = "order" if "order" in lines or "pade" not in lines else "pade"
        raise ConfigError(key, lines.get(key), f"order {cfg.order} is below N+M = {need} of the requested Padé orders")
    if cfg.precision == "rational":
        try:
            arith.to_fraction(cfg.omega)
        except DomainError as exc:
            raise ConfigError("omega", lines.get("omega"), str(exc)) from None
    return cfg


def parse_config(text: str, base: SweepConfig | None = None) -> SweepConfig:
    """Parse a flat ``key = value`` document; ``#`` starts a comment."""
    items = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        body = rawline.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(key or "?", lineno, "expected 'key = value'")
        items.append((key, value, lineno))
    return config_from_items(items, base)


@dataclass(frozen=True)
class PadeCell:
    orders: tuple[int, int]
    value: float
    flag: str
    denominator: float


@dataclass(frozen=True)
class ResultRow:
    n: int
    lam: float
    partial_sum_4: float
    pade: tuple
    eq13: float
    oracle: float
    oracle_converged: bool | None
    max_disc: float = field(default=math.nan)


def _max_gap(values) -> float:
    vals = [v for v in values if v is not None and math.isfinite(v)]
    if len(vals) < 2:
        return 0.0
    return max(vals) - min(vals)


def _rspt_agrees(series, oracle_series) -> bool:
    for a, b in zip(series, oracle_series):
        a = float(a)
        if abs(a - b) > RSPT_AGREEMENT * max(abs(a), 1e-300):
            return False
    return True


def run_sweep(config: SweepConfig) -> list[ResultRow]:
    rows = []
    for n in config.states:
        spec = config.model(n)
        series, _ = compute_series(spec)
        approximants = {}
        for N, M in config.pade_orders:
            try:
                approximants[(N, M)] = build_pade(series, N, M)
            except DefectiveApproximant:
                approximants[(N, M)] = None
        rspt = None
        if config.oracle in ("rspt", "both"):
            K = config.order
            rspt = rspt_coefficients(spec, K, max(80, n + 3 * K + 10))
            rspt_ok = _rspt_agrees(series, rspt)
        for lam in config.lambdas:
            cells = []
            for orders, approx in approximants.items():
                if approx is None:
                    cells.append(PadeCell(orders, math.nan, DEFECTIVE, math.nan))
                    continue
                try:
                    value, den = evaluate_pade(approx, lam)
                except PoleAtEvaluationPoint:
                    cells.append(PadeCell(orders, math.nan, POLE, 0.0))
                    continue
                flag = POLE if den < config.pole_threshold else OK
                cells.append(PadeCell(orders, value, flag, den))
            e4 = partial_sum(series, lam, min(4, series.order))
            eq13 = eq13_reference(n, float(spec.omega), lam)
            oracle, converged = math.nan, None
            if config.oracle in ("variational", "both"):
                res = converged_energy(spec, lam, n, ORACLE_TOL)
                oracle, converged = res.level(n), res.converged
                if config.oracle == "both":
                    converged = converged and rspt_ok
            elif config.oracle == "rspt":
                oracle, converged = partial_sum(rspt, lam), True
            gap = _max_gap([e4, *(c.value for c in cells), oracle])
            rows.append(ResultRow(n, lam, e4, tuple(cells), eq13, oracle, converged, gap))
    return rows


def anomalies(rows) -> list[tuple[int, float, tuple[int, int], str]]:
    return [(r.n, r.lam, c.orders, c.flag) for r in rows for c in r.pade if c.flag != OK]


def _six(x: float) -> str:
    if not math.isfinite(x):
        return "nan"
    return str(Decimal(repr(x)).quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN))


def _full(x: float) -> str:
    return "nan" if not math.isfinite(x) else format(x, ".17g")


def _converged_text(c: bool | None) -> str:
    return "na" if c is None else ("true" if c else "false")


def render(rows, output_format: str = "table") -> str:
    if output_format == "csv":
        return render_csv(rows)
    if output_format == "table":
        return render_table(rows)
    raise DomainError(f"unknown format {output_format!r}")


def _orders_of(rows):
    return [c.orders for c in rows[0].pade] if rows else []


def render_csv(rows) -> str:
    orders = _orders_of(rows)
    header = ["n", "lambda", "E4"]
    header += [f"E_{N}_{M}" for N, M in orders]
    header += [f"flag_{N}_{M}" for N, M in orders]
    header += ["eq13", "oracle", "oracle_converged", "max_disc"]
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for r in rows:
        fields = [str(r.n), repr(float(r.lam)), _full(r.partial_sum_4)]
        fields += [_full(c.value) for c in r.pade]
        fields += [c.flag for c in r.pade]
        fields += [_full(r.eq13), _full(r.oracle), _converged_text(r.oracle_converged), _full(r.max_disc)]
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def render_table(rows) -> str:
    orders = _orders_of(rows)
    header = ["n", "lambda", "E[4]"]
    for N, M in orders:
        header += [f"E[{N},{M}]", "flag"]
    header += ["Eq13", "oracle", "conv", "max_disc"]
    body = []
    for r in rows:
        line = [str(r.n), format(r.lam, "g"), _six(r.partial_sum_4)]
        for c in r.pade:
            line += [_six(c.value), c.flag]
        line += [_six(r.eq13), _six(r.oracle), _converged_text(r.oracle_converged), f"{r.max_disc:.1e}"]
        body.append(line)
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[dict]:
    """Read :func:`render_csv` output back into dicts of floats and strings."""
    lines = text.rstrip("\n").split("\n")
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        rec = {}
        for key, raw in zip(header, line.split(",")):
            if key == "n":
                rec[key] = int(raw)
            elif key.startswith("flag_") or key == "oracle_converged":
                rec[key] = raw
            else:
                rec[key] = float(raw)
        out.append(rec)
    return out


def series_csv(series) -> str:
    """``k,numerator,denominator`` rows of an exact energy series."""
    out = io.StringIO()
    out.write("k,numerator,denominator\n")
    for k, (p, q) in enumerate(series.as_ratios()):
        out.write(f"{k},{p},{q}\n")
    return out.getvalue()
