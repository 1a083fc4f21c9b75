"""File formats: chain and joint JSON, trace CSV, report emission.

Outputs are byte-stable: fixed key order, floats normalized to 12
significant digits in reports and traces, full 17-digit round-trip floats
in chain files, and a final newline everywhere.  Malformed input raises
ParseError; mathematically invalid values surface as the constructors'
domain errors.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bounds import BoundReport
from .errors import ParseError
from .markov import Distribution, MeasureFamily, RateMatrix, StochasticMatrix
from .measures import JointDistribution, PairMeasure
from .monotonicity import MonotonicityVerdict, TimeSeries

__all__ = [
    "load_chain",
    "save_chain",
    "load_distribution",
    "save_distribution",
    "load_joint",
    "load_pair_measures",
    "load_family",
    "write_json",
    "trace_csv_text",
    "write_trace_csv",
    "report_csv_text",
    "write_report_csv",
    "verdict_to_dict",
    "series_to_dict",
]

SIGNIFICANT_DIGITS = 12


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError:
        raise
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return doc


def _field(doc: dict, key: str, path) -> object:
    if key not in doc:
        raise ParseError(f"{path}: missing field {key!r}")
    return doc[key]


def load_chain(path) -> StochasticMatrix | RateMatrix:
    """Read a chain file: {"kind", "n", "matrix", optional "labels"}."""
    doc = _read_json(path)
    kind = _field(doc, "kind", path)
    n = _field(doc, "n", path)
    matrix = _field(doc, "matrix", path)
    if kind not in ("discrete", "continuous"):
        raise ParseError(f"{path}: kind must be 'discrete' or 'continuous', got {kind!r}")
    try:
        arr = np.asarray(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: matrix is not numeric") from exc
    if arr.shape != (n, n):
        raise ParseError(f"{path}: matrix shape {arr.shape} does not match n={n}")
    return RateMatrix(arr) if kind == "continuous" else StochasticMatrix(arr)


def save_chain(chain: StochasticMatrix | RateMatrix, path) -> None:
    doc = {
        "kind": "continuous" if isinstance(chain, RateMatrix) else "discrete",
        "n": chain.n,
        "matrix": [[float(x) for x in row] for row in chain.matrix],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_distribution(path) -> Distribution:
    doc = _read_json(path)
    return Distribution(np.asarray(_field(doc, "probs", path), dtype=float))


def save_distribution(dist: Distribution, path) -> None:
    doc = {"probs": [float(x) for x in dist.probs]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_joint(path) -> JointDistribution:
    """Read a joint law file: {"nx", "ny", "table", optional "measures"}."""
    doc = _read_json(path)
    nx = _field(doc, "nx", path)
    ny = _field(doc, "ny", path)
    table = np.asarray(_field(doc, "table", path), dtype=float)
    if table.shape != (nx, ny):
        raise ParseError(f"{path}: table shape {table.shape} does not match ({nx}, {ny})")
    return JointDistribution(table)


def load_pair_measures(path) -> list[PairMeasure]:
    """Read the "measures" array of a joint file as grid measures."""
    doc = _read_json(path)
    raw = _field(doc, "measures", path)
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 3:
        raise ParseError(f"{path}: measures must be a list of 2-d tables")
    return [PairMeasure(m) for m in arr]


def load_family(path) -> MeasureFamily:
    """Read a measure family file: {"measures": (k+1) x n rows}."""
    doc = _read_json(path)
    arr = np.asarray(_field(doc, "measures", path), dtype=float)
    if arr.ndim != 2:
        raise ParseError(f"{path}: family measures must be a 2-d array")
    return MeasureFamily(arr, require_positive=bool(doc.get("require_positive", True)))


def _round_floats(obj):
    if isinstance(obj, float):
        # + 0.0 turns IEEE negative zero into plain zero
        return float(f"{obj + 0.0:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return _round_floats(float(obj))
    return obj


def write_json(obj: dict, path=None) -> str:
    """Render a report object with normalized floats; write when given a path."""
    text = json.dumps(_round_floats(obj), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _fmt(x: float) -> str:
    return f"{x + 0.0:.{SIGNIFICANT_DIGITS}g}"


def trace_csv_text(series: TimeSeries) -> str:
    lines = ["t,value"]
    for t, v in zip(series.times, series.values):
        t_text = str(int(t)) if float(t).is_integer() else _fmt(t)
        lines.append(f"{t_text},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def write_trace_csv(series: TimeSeries, path) -> None:
    Path(path).write_text(trace_csv_text(series))


def report_csv_text(report: BoundReport) -> str:
    lines = ["s,psi,d"]
    for s, p, d in zip(report.s_grid, report.psi_values, report.d_values):
        lines.append(f"{_fmt(s)},{_fmt(p)},{_fmt(d)}")
    return "\n".join(lines) + "\n"


def write_report_csv(report: BoundReport, path) -> None:
    Path(path).write_text(report_csv_text(report))


def verdict_to_dict(v: MonotonicityVerdict) -> dict:
    return {
        "direction": v.direction,
        "holds": v.holds,
        "max_violation": v.max_violation,
        "argmax_step": v.argmax_step,
    }


def series_to_dict(series: TimeSeries) -> dict:
    return {
        "t": [float(t) for t in series.times],
        "value": [float(v) for v in series.values],
    }
