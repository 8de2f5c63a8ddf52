"""Canonical text forms: deterministic JSON, scenario documents, CSV tables.

All numbers render as decimal with 17 significant digits, which round-trips
IEEE doubles exactly, so identical data always produces identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigInvalid
from .functions import GE, LE, ScalarFunction, function_from_descriptor
from .functionals import fmt
from .ensembles import PER_VECTOR, SUM_OF_SQUARES, OperatorEnsemble
from .spectral import HermitianOperator, SpectralInterval, StateVector
from .tolerances import DEFAULT_GRID_N

__all__ = [
    "canonical_json",
    "interval_from_doc",
    "operator_from_doc",
    "state_from_doc",
    "ensemble_from_doc",
    "scenario_from_doc",
    "load_json",
    "rows_to_csv",
]


def _write(obj, out: list) -> None:
    if obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ConfigInvalid("non-finite number in a canonical document")
        out.append(fmt(x))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for key in sorted(obj):
            if not isinstance(key, str):
                raise ConfigInvalid(f"document keys must be strings, got {key!r}")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(key))
            out.append(":")
            _write(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for k, item in enumerate(obj):
            if k:
                out.append(",")
            _write(item, out)
        out.append("]")
    else:
        raise ConfigInvalid(f"cannot serialize a {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Compact JSON with sorted keys and 17-significant-digit numbers."""
    out: list = []
    _write(obj, out)
    return "".join(out)


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"not valid JSON: {exc}") from None


def _real(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigInvalid(f"{what} must be a number, got {value!r}")
    return float(value)


def _complex_entry(value, what: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_real(value[0], what), _real(value[1], what))
    raise ConfigInvalid(f"{what} must be a number or an [re, im] pair, got {value!r}")


def interval_from_doc(doc, what: str = "interval") -> SpectralInterval:
    if not isinstance(doc, (list, tuple)) or len(doc) != 2:
        raise ConfigInvalid(f"{what} must be an [lo, hi] pair")
    return SpectralInterval(_real(doc[0], f"{what} lo"), _real(doc[1], f"{what} hi"))


def operator_from_doc(doc) -> HermitianOperator:
    """Accepts a diagonal, dense-matrix, or eigendecomposition document."""
    if not isinstance(doc, dict) or "interval" not in doc:
        raise ConfigInvalid("operator document needs an 'interval'")
    interval = interval_from_doc(doc["interval"])
    if "diagonal" in doc:
        values = [_real(v, "diagonal entry") for v in doc["diagonal"]]
        return HermitianOperator.diagonal(values, interval)
    if "matrix" in doc:
        rows = doc["matrix"]
        if not isinstance(rows, (list, tuple)) or not rows:
            raise ConfigInvalid("'matrix' must be a nonempty list of rows")
        m = [[_complex_entry(v, "matrix entry") for v in row] for row in rows]
        from .spectral import from_dense

        return from_dense(m, interval)
    if "eigenvalues" in doc and "eigenvectors" in doc:
        values = [_real(v, "eigenvalue") for v in doc["eigenvalues"]]
        rows = doc["eigenvectors"]
        if not isinstance(rows, (list, tuple)) or len(rows) != len(values):
            raise ConfigInvalid("'eigenvectors' must list one row per eigenvalue")
        u = np.asarray(
            [[_complex_entry(v, "eigenvector entry") for v in row] for row in rows],
            dtype=np.complex128,
        )
        return HermitianOperator(np.asarray(values, dtype=np.float64), u, interval)
    raise ConfigInvalid(
        "operator document needs 'diagonal', 'matrix', or 'eigenvalues'+'eigenvectors'"
    )


def state_from_doc(doc) -> StateVector:
    if isinstance(doc, dict) and "components" in doc:
        doc = doc["components"]
    if not isinstance(doc, (list, tuple)) or not doc:
        raise ConfigInvalid("state document needs a nonempty 'components' list")
    comps = [_complex_entry(v, "state component") for v in doc]
    return StateVector(np.asarray(comps, dtype=np.complex128))


def ensemble_from_doc(doc) -> OperatorEnsemble:
    if not isinstance(doc, dict):
        raise ConfigInvalid("ensemble document must be an object")
    try:
        operators = doc["operators"]
        states = doc["states"]
        normalization = doc["normalization"]
    except KeyError as exc:
        raise ConfigInvalid(f"ensemble document needs {exc.args[0]!r}") from None
    if normalization not in (SUM_OF_SQUARES, PER_VECTOR):
        raise ConfigInvalid(
            f"normalization must be '{SUM_OF_SQUARES}' or '{PER_VECTOR}', "
            f"got {normalization!r}"
        )
    if not isinstance(operators, (list, tuple)) or not isinstance(states, (list, tuple)):
        raise ConfigInvalid("ensemble 'operators' and 'states' must be lists")
    return OperatorEnsemble(
        tuple(operator_from_doc(d) for d in operators),
        tuple(state_from_doc(d) for d in states),
        normalization,
    )


def _functions_from_doc(doc) -> dict[str, ScalarFunction]:
    if not isinstance(doc, dict):
        raise ConfigInvalid("'functions' must map slot names to function literals")
    out: dict[str, ScalarFunction] = {}
    for name, literal in doc.items():
        if name not in ("f", "g", "h"):
            raise ConfigInvalid(f"unknown function slot {name!r} (expected f, g, h)")
        out[name] = function_from_descriptor(literal)
    return out


def _expect_from_doc(doc) -> dict:
    if not isinstance(doc, dict):
        raise ConfigInvalid("'expect' must be an object")
    out: dict = {}
    for key, value in doc.items():
        if key == "verdict":
            if value not in ("holds", "violated", "hypothesis-not-met"):
                raise ConfigInvalid(f"unknown expected verdict {value!r}")
            out[key] = value
        elif key in ("lhs", "rhs", "gap", "atol"):
            out[key] = _real(value, f"expect {key}")
        else:
            raise ConfigInvalid(f"unknown expect field {key!r}")
    return out


def scenario_from_doc(doc) -> dict:
    """Validate a scenario document and build the typed objects it describes.

    Returns a dict with keys: theorem, direction, grid_n, gate_hypothesis,
    functions, and whichever of operator/operator_b/state/state_b/ensemble/
    per_op_intervals/tuples/bound_interval/expect the document carries.
    """
    if not isinstance(doc, dict):
        raise ConfigInvalid("scenario must be a JSON object")
    theorem = doc.get("theorem")
    if not isinstance(theorem, str):
        raise ConfigInvalid("scenario needs a 'theorem' identifier string")
    direction = doc.get("direction")
    if direction is not None and direction not in (GE, LE):
        raise ConfigInvalid(f"direction must be '>=' or '<=', got {direction!r}")
    grid_raw = doc.get("grid_n", DEFAULT_GRID_N)
    if isinstance(grid_raw, bool) or not isinstance(grid_raw, int):
        raise ConfigInvalid(f"grid_n must be an integer, got {grid_raw!r}")
    parsed: dict = {
        "theorem": theorem,
        "direction": direction,
        "grid_n": grid_raw,
        "gate_hypothesis": bool(doc.get("gate_hypothesis", True)),
        "functions": _functions_from_doc(doc.get("functions", {})),
    }
    known = {
        "theorem",
        "direction",
        "grid_n",
        "gate_hypothesis",
        "functions",
        "operator",
        "operator_b",
        "state",
        "state_b",
        "ensemble",
        "per_op_intervals",
        "tuples",
        "bound_interval",
        "expect",
        "name",
    }
    for key in doc:
        if key not in known:
            raise ConfigInvalid(f"unknown scenario field {key!r}")
    if "operator" in doc:
        parsed["operator"] = operator_from_doc(doc["operator"])
    if "operator_b" in doc:
        parsed["operator_b"] = operator_from_doc(doc["operator_b"])
    if "state" in doc:
        parsed["state"] = state_from_doc(doc["state"])
    if "state_b" in doc:
        parsed["state_b"] = state_from_doc(doc["state_b"])
    if "ensemble" in doc:
        parsed["ensemble"] = ensemble_from_doc(doc["ensemble"])
    if "per_op_intervals" in doc:
        rows = doc["per_op_intervals"]
        if not isinstance(rows, (list, tuple)):
            raise ConfigInvalid("'per_op_intervals' must be a list of [lo, hi] pairs")
        parsed["per_op_intervals"] = [
            (iv.lo, iv.hi)
            for iv in (interval_from_doc(r, "per-operator interval") for r in rows)
        ]
    if "tuples" in doc:
        pairs = doc["tuples"]
        if not isinstance(pairs, dict) or "a" not in pairs or "b" not in pairs:
            raise ConfigInvalid("'tuples' must be an object with lists 'a' and 'b'")
        parsed["tuples"] = {
            "a": [_real(v, "tuple entry") for v in pairs["a"]],
            "b": [_real(v, "tuple entry") for v in pairs["b"]],
        }
    if "bound_interval" in doc:
        parsed["bound_interval"] = interval_from_doc(doc["bound_interval"], "bound_interval")
    if "expect" in doc:
        parsed["expect"] = _expect_from_doc(doc["expect"])
    return parsed


def _cell(value) -> str:
    if value is None:
        return ""
    if value is True or value is False:
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return fmt(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def rows_to_csv(fieldnames: Sequence[str], rows: Sequence[dict]) -> str:
    """CSV text with a header row; numbers formatted like the JSON documents."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in fieldnames])
    return buf.getvalue()
