"""System and report files.

Systems travel as a single self-describing JSON document with integer
dimensions and row-major numeric arrays:

    {"n": 4, "m": 3, "p": 2, "A": [[...], ...], "B": [...], "C": [...]}

Strictly proper plants only: a "D" field is rejected outright. Reports
are JSON too, with every float serialized at full double precision (the
shortest round-tripping decimal representation).
"""

from __future__ import annotations

import json
import math

import numpy as np

from .exceptions import SystemFileError
from .linalg import Tolerances
from .statespace import AssumptionReport, StateSpace, ZeroSet

__all__ = [
    "load_system",
    "parse_system",
    "dump_system",
    "save_system",
    "complex_pairs",
    "assumptions_dict",
    "zeroset_dict",
    "tolerances_dict",
]


def parse_system(text: str) -> StateSpace:
    """Parse a system document; raises SystemFileError naming the bad field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SystemFileError("top-level value must be an object")
    if "D" in doc:
        raise SystemFileError(
            "field 'D' is not accepted: only strictly proper plants (D = 0) are supported"
        )
    dims = {}
    for name in ("n", "m", "p"):
        if name not in doc:
            raise SystemFileError(f"missing integer field '{name}'")
        value = doc[name]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise SystemFileError(f"field '{name}' must be a positive integer, got {value!r}")
        dims[name] = value
    shapes = {
        "A": (dims["n"], dims["n"]),
        "B": (dims["n"], dims["m"]),
        "C": (dims["p"], dims["n"]),
    }
    arrays = {}
    for name, (rows, cols) in shapes.items():
        if name not in doc:
            raise SystemFileError(f"missing array field '{name}'")
        arrays[name] = _parse_array(name, doc[name], rows, cols)
    try:
        return StateSpace(arrays["A"], arrays["B"], arrays["C"])
    except ValueError as exc:
        raise SystemFileError(str(exc)) from exc


def _parse_array(name, value, rows, cols):
    if not isinstance(value, list) or len(value) != rows:
        raise SystemFileError(f"field '{name}' must be a list of {rows} rows")
    out = np.empty((rows, cols))
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise SystemFileError(f"field '{name}': row {i} must have {cols} entries")
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise SystemFileError(f"field '{name}': entry ({i},{j}) is not a number")
            if not math.isfinite(entry):
                raise SystemFileError(f"field '{name}': entry ({i},{j}) is not finite")
            out[i, j] = float(entry)
    return out


def load_system(path) -> StateSpace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc}") from exc
    return parse_system(text)


def dump_system(sys: StateSpace) -> str:
    doc = {
        "n": sys.n,
        "m": sys.m,
        "p": sys.p,
        "A": sys.A.tolist(),
        "B": sys.B.tolist(),
        "C": sys.C.tolist(),
    }
    return json.dumps(doc, indent=2) + "\n"


def save_system(sys: StateSpace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_system(sys))


def complex_pairs(zs) -> list:
    """Complex scalars as {'re':…, 'im':…} objects (JSON has no complex type)."""
    return [{"re": float(z.real), "im": float(z.imag)} for z in zs]


def zeroset_dict(zs: ZeroSet) -> dict:
    return {
        "input_decoupling": complex_pairs(zs.input_decoupling),
        "output_decoupling": complex_pairs(zs.output_decoupling),
        "invariant": complex_pairs(zs.invariant),
        "transmission": complex_pairs(zs.transmission),
        "degenerate": bool(zs.degenerate),
    }


def assumptions_dict(report: AssumptionReport) -> dict:
    out = {}
    for name in report._ORDER:
        check = getattr(report, name)
        out[name] = {"passed": bool(check.passed), "diagnostic": float(check.diagnostic)}
    out["overall_pass"] = bool(report.overall_pass)
    out["zero_convention"] = report.zero_convention
    return out


def tolerances_dict(tol: Tolerances) -> dict:
    return {
        "rank_rel": tol.rank_rel,
        "pbh": tol.pbh,
        "zero_match": tol.zero_match,
        "care_residual": tol.care_residual,
    }
