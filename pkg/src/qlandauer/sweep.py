"""Sweep configuration, execution, output and invariant verification."""
import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

import numpy as np

from .errors import QLandauerError
from .erasure import analyze_point, gad_residuals
from .model import N_MAX, ModelParams

AXIS_NAMES = ("alpha", "Jt", "beta", "N")
CSV_COLUMNS = (
    "alpha", "beta", "Jt", "N", "J", "J0", "B", "B0",
    "avg_heat_beta", "bound_Q", "bound_RW", "delta_S",
    "exp_heat_A", "exp_heat_M", "exp_heat_dist",
    "nonunitality", "trace_residual", "entropy_final_system",
)
DEFAULT_COUNT = 201
PRESETS = ("fig1b", "fig1c", "fig2")


class ConfigError(QLandauerError, ValueError):
    """Invalid configuration document."""


class SweepPointError(QLandauerError, RuntimeError):
    def __init__(self, coords, cause):
        self.coords = coords
        self.cause = cause
        where = ", ".join(f"{k}={v}" for k, v in coords.items())
        super().__init__(f"sweep point ({where}) failed: {cause}")


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple


@dataclass
class SweepConfig:
    J: float = 1.0
    J0: float = 1.0
    B: float = 1.0
    B0: float = 1.0
    fixed: dict = field(default_factory=lambda: {"alpha": 1.0, "Jt": 1.0, "beta": 1.0, "N": 1})
    axes: list = field(default_factory=list)
    rw_dimension_exponent_offset: int = 0
    output_path: str = None
    output_format: str = "csv"
    delta_s_rw_rel_tol: float = None

    def grid(self):
        """Coordinate dicts in row-major order (first axis slowest)."""
        names = [a.name for a in self.axes]
        for combo in product(*(a.values for a in self.axes)):
            point = dict(self.fixed)
            point.update(zip(names, combo))
            yield point

    def __len__(self):
        n = 1
        for a in self.axes:
            n *= len(a.values)
        return n

    def params_at(self, point):
        return ModelParams.from_jt(
            point["Jt"], J=self.J, J0=self.J0, B=self.B, B0=self.B0,
            N=point["N"], beta=point["beta"], alpha=point["alpha"],
        )


def _reject_unknown(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{where}: unknown key {key!r}")


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name}: must be a finite number, got {value!r}")
    return float(value)


def _check_point_value(name, value, where):
    if name == "N":
        if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= N_MAX:
            raise ConfigError(f"{where}: N must be an integer in [1, {N_MAX}], got {value!r}")
        return value
    value = _number(value, where)
    if name == "alpha" and not 0.0 <= value <= 1.0:
        raise ConfigError(f"{where}: alpha must lie in [0, 1], got {value}")
    if name == "beta" and value < 0.0:
        raise ConfigError(f"{where}: beta must be >= 0, got {value}")
    return value


def _parse_axis(obj, i):
    where = f"axes[{i}]"
    _reject_unknown(obj, {"name", "start", "stop", "count", "values"}, where)
    name = obj.get("name")
    if name not in AXIS_NAMES:
        raise ConfigError(f"{where}.name: must be one of {', '.join(AXIS_NAMES)}, got {name!r}")
    if "values" in obj:
        if any(k in obj for k in ("start", "stop", "count")):
            raise ConfigError(f"{where}: give either values or start/stop/count, not both")
        raw = obj["values"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"{where}.values: must be a non-empty list")
        values = tuple(_check_point_value(name, v, f"{where}.values") for v in raw)
        return Axis(name, values)
    if name == "N":
        raise ConfigError(f"{where}: the N axis takes an integer list under 'values'")
    for key in ("start", "stop"):
        if key not in obj:
            raise ConfigError(f"{where}.{key}: required")
    start = _check_point_value(name, obj["start"], f"{where}.start")
    stop = _check_point_value(name, obj["stop"], f"{where}.stop")
    count = obj.get("count", DEFAULT_COUNT)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise ConfigError(f"{where}.count: must be an integer >= 1, got {count!r}")
    values = tuple(float(v) for v in np.linspace(start, stop, count))
    return Axis(name, values)


def config_from_dict(doc):
    _reject_unknown(doc, {"model", "fixed", "axes", "rw_dimension_exponent_offset", "output", "checks"}, "config")
    cfg = SweepConfig()
    model = doc.get("model", {})
    _reject_unknown(model, {"J", "J0", "B", "B0"}, "model")
    for key, value in model.items():
        setattr(cfg, key, _number(value, f"model.{key}"))
    fixed = doc.get("fixed", {})
    _reject_unknown(fixed, set(AXIS_NAMES), "fixed")
    for key, value in fixed.items():
        cfg.fixed[key] = _check_point_value(key, value, f"fixed.{key}")
    axes = doc.get("axes", [])
    if not isinstance(axes, list):
        raise ConfigError("axes: must be a list")
    if len(axes) > 2:
        raise ConfigError(f"axes: at most two swept parameters allowed, got {len(axes)}")
    cfg.axes = [_parse_axis(a, i) for i, a in enumerate(axes)]
    names = [a.name for a in cfg.axes]
    if len(set(names)) != len(names):
        raise ConfigError(f"axes: swept parameter names must be distinct, got {names}")
    if cfg.J == 0:
        raise ConfigError("model.J: must be non-zero because time is given as Jt")
    offset = doc.get("rw_dimension_exponent_offset", 0)
    if isinstance(offset, bool) or not isinstance(offset, int):
        raise ConfigError(f"rw_dimension_exponent_offset: must be an integer, got {offset!r}")
    cfg.rw_dimension_exponent_offset = offset
    output = doc.get("output", {})
    _reject_unknown(output, {"path", "format"}, "output")
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path: must be a string or null")
    cfg.output_path = path
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: must be 'csv' or 'json', got {fmt!r}")
    cfg.output_format = fmt
    checks = doc.get("checks", {})
    _reject_unknown(checks, {"delta_s_rw_rel_tol"}, "checks")
    tol = checks.get("delta_s_rw_rel_tol")
    if tol is not None:
        tol = _number(tol, "checks.delta_s_rw_rel_tol")
        if tol < 0:
            raise ConfigError("checks.delta_s_rw_rel_tol: must be >= 0")
    cfg.delta_s_rw_rel_tol = tol
    return cfg


def parse_config(text):
    """Parse and validate a JSON sweep configuration."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"JSON syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return config_from_dict(doc)


def preset_document(name, jt=1.0):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    doc = json.loads(resources.files("qlandauer").joinpath(f"presets/{name}.json").read_text("utf-8"))
    if name != "fig2":
        doc["fixed"]["Jt"] = float(jt)
    return doc


def preset_config(name, jt=1.0):
    return config_from_dict(preset_document(name, jt))


def _run_point(args):
    cfg, point = args
    try:
        return analyze_point(cfg.params_at(point), cfg.rw_dimension_exponent_offset)
    except QLandauerError as exc:
        raise SweepPointError(point, exc) from exc


def _analyze_all(cfg, workers=1):
    jobs = [(cfg, point) for point in cfg.grid()]
    if workers is None or workers <= 1 or len(jobs) < 2:
        return [_run_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def run_sweep(cfg, workers=1):
    """One ErasureRecord per grid point, in row-major axis order."""
    return [a.record for a in _analyze_all(cfg, workers)]


def _format(value):
    if isinstance(value, int):
        return str(value)
    return format(value, ".12g")


def emit_csv(records, destination):
    """Write records as CSV to a path or a text stream."""
    if not records:
        raise ValueError("no records to emit")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = rec.as_row()
        writer.writerow([_format(row[c]) for c in CSV_COLUMNS])
    _write(buf.getvalue(), destination)


def emit_json(records, destination):
    if not records:
        raise ValueError("no records to emit")
    text = json.dumps([r.as_row() for r in records], indent=1) + "\n"
    _write(text, destination)


def _write(text, destination):
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def emit(records, destination, fmt="csv"):
    (emit_json if fmt == "json" else emit_csv)(records, destination)


@dataclass
class CheckResult:
    name: str
    tolerance: float
    max_residual: float = 0.0
    points: int = 0
    worst_point: dict = None

    @property
    def passed(self):
        return self.max_residual <= self.tolerance

    def update(self, residual, point):
        self.points += 1
        if residual > self.max_residual or (math.isnan(residual)):
            self.max_residual = residual
            self.worst_point = point

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        if self.points == 0:
            return f"{status} {self.name}: not applicable on this grid"
        return (
            f"{status} {self.name}: max residual {self.max_residual:.3e} "
            f"(tol {self.tolerance:.1e}, {self.points} points)"
        )


@dataclass
class VerificationReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def text(self):
        lines = [c.line() for c in self.checks]
        lines.append("ALL PASS" if self.passed else "FAILURES PRESENT")
        return "\n".join(lines) + "\n"

    def as_dict(self):
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "max_residual": c.max_residual,
                    "tolerance": c.tolerance,
                    "points": c.points,
                    "worst_point": c.worst_point,
                }
                for c in self.checks
            ],
        }


# (name, tolerance); residuals are non-negative, smaller is better.
INVARIANTS = (
    ("trace_preservation", 1e-10),
    ("operation_identity", 1e-10),
    ("exp_heat_dist_vs_A", 1e-9),
    ("exp_heat_A_vs_M", 1e-9),
    ("heat_moment", 1e-9),
    ("distribution_normalization", 1e-10),
    ("distribution_nonnegative", 1e-12),
    ("jensen_bound", 1e-9),
    ("landauer_bound", 1e-9),
    ("bound_RW_nonpositive", 0.0),
    ("beta0_exp_heat_unity", 1e-12),
    ("beta0_bound_Q_zero", 1e-12),
    ("unital_implies_zero_bound", 1e-9),
    ("gad_avg_heat", 1e-9),
    ("gad_bound_Q", 1e-9),
    ("gad_final_state", 1e-9),
)
UNITAL_ATOL = 1e-10


def verify(cfg, workers=1, kraus_hook=None):
    """Evaluate every invariant over the configuration grid."""
    checks = {name: CheckResult(name, tol) for name, tol in INVARIANTS}
    if kraus_hook is None:
        analyses = _analyze_all(cfg, workers)
    else:
        analyses = [
            analyze_point(cfg.params_at(p), cfg.rw_dimension_exponent_offset, kraus_hook)
            for p in cfg.grid()
        ]
    for point, an in zip(cfg.grid(), analyses):
        res, rec = an.residuals, an.record
        checks["trace_preservation"].update(res["trace_preservation"], point)
        checks["operation_identity"].update(res["operation_identity"], point)
        checks["exp_heat_dist_vs_A"].update(res["exp_heat_dist_vs_A"], point)
        checks["exp_heat_A_vs_M"].update(res["exp_heat_A_vs_M"], point)
        checks["heat_moment"].update(res["moment"], point)
        checks["distribution_normalization"].update(res["normalization"], point)
        checks["distribution_nonnegative"].update(max(0.0, -res["min_probability"]), point)
        checks["jensen_bound"].update(max(0.0, -res["jensen_slack"]), point)
        checks["landauer_bound"].update(max(0.0, -res["landauer_slack"]), point)
        checks["bound_RW_nonpositive"].update(max(0.0, rec.bound_RW), point)
        if rec.params.beta == 0.0:
            checks["beta0_exp_heat_unity"].update(abs(rec.exp_heat_dist - 1.0), point)
            checks["beta0_bound_Q_zero"].update(abs(rec.bound_Q), point)
        if rec.nonunitality <= UNITAL_ATOL:
            checks["unital_implies_zero_bound"].update(abs(rec.bound_Q), point)
        if rec.params.N == 1 and rec.params.matched:
            g = gad_residuals(an)
            checks["gad_avg_heat"].update(g["gad_avg_heat"], point)
            checks["gad_bound_Q"].update(g["gad_bound_Q"], point)
            checks["gad_final_state"].update(g["gad_final_state"], point)
    out = list(checks.values())
    if cfg.delta_s_rw_rel_tol is not None:
        out.append(entropy_rw_agreement([a.record for a in analyses], cfg.delta_s_rw_rel_tol))
    return VerificationReport(out)


def entropy_rw_agreement(records, rel_tol):
    """max |Delta S - B_RW| against rel_tol * max |Delta S| over the records."""
    ds = np.array([r.delta_S for r in records])
    rw = np.array([r.bound_RW for r in records])
    scale = float(np.max(np.abs(ds))) if len(ds) else 0.0
    gap = np.abs(ds - rw)
    i = int(np.argmax(gap)) if len(gap) else 0
    check = CheckResult("delta_S_vs_bound_RW", rel_tol)
    if len(records):
        check.points = len(records)
        check.max_residual = float(gap[i]) / scale if scale > 0 else 0.0
        check.worst_point = records[i].as_row()
    return check
