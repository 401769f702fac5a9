"""Problem documents in, JSON and CSV out.

A problem document looks like::

    {
      "algebra": {"family": "A", "rank": 2},
      "domain": {"kind": "rectangle", "x_range": [-1, 1], "y_range": [-1, 1], "nx": 17, "ny": 17},
      "higgs": [{"root": "alpha_1", "terms": [{"k": 0, "re": 1.0, "im": 0.0}]}, ...],
      "boundary": {"kind": "canonical_plus", "delta": [0.3, 0.0]},
      "scale_t": 1.0,
      "solver": {"tol": 1e-10, "max_iter": 50}
    }

Boundary kinds: ``constant`` (``values``), ``canonical_plus`` (``delta``
added to the canonical decoupled metric of the Higgs data) and ``model``
(``beta``, ``subset``, ``m``; the Higgs data is then implied).
"""

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np
import sympy

from .chevalley import build_lie_algebra
from .config import SolverDefaults
from .errors import InputError
from .rootsys import SimpleType, build_root_system
from .toda.grids import grid_from_dict
from .toda.model import ModelMetric, canonical_xi, canonical_xi_field, model_metric_data
from .toda.problem import HiggsCoefficient, TodaProblem, constant_boundary

BOUNDARY_KINDS = ("constant", "canonical_plus", "model")


def read_document(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"Cannot read problem document {source}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"Problem document {source} is not valid JSON: {e}") from e


def _algebra(document: dict):
    algebra = document.get("algebra")
    if not isinstance(algebra, dict):
        raise InputError("Problem document needs an 'algebra' object with family and rank")
    try:
        simple_type = SimpleType(str(algebra["family"]).upper(), int(algebra["rank"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed algebra {algebra!r}") from e
    return build_lie_algebra(build_root_system(simple_type), logging=False)


def _floats(values: Any, name: str, length: int) -> np.ndarray:
    try:
        array = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"'{name}' must be a list of numbers") from e
    if array.shape != (length,) or not np.all(np.isfinite(array)):
        raise InputError(f"'{name}' needs {length} finite numbers, got {values!r}")
    return array


def load_problem(source: Union[str, Path, dict], tol: Optional[float] = None,
                 max_iter: Optional[int] = None) -> TodaProblem:
    """Parse and validate a problem document.

    ``tol`` and ``max_iter`` override the document's solver block.

    Raises:
        InputError: on any malformed or inconsistent field.
    """
    document = read_document(source)
    lie = _algebra(document)
    rs = lie.rs
    grid = grid_from_dict(document.get("domain") or {})
    try:
        t = float(document.get("scale_t", 1.0))
    except (TypeError, ValueError) as e:
        raise InputError(f"scale_t must be a number, got {document.get('scale_t')!r}") from e
    solver = document.get("solver") or {}
    if not isinstance(solver, dict):
        raise InputError(f"solver must be an object, got {solver!r}")
    tol = solver.get("tol") if tol is None else tol
    max_iter = solver.get("max_iter") if max_iter is None else max_iter
    try:
        tol = None if tol is None else float(tol)
        max_iter = None if max_iter is None else int(max_iter)
    except (TypeError, ValueError) as e:
        raise InputError(f"Malformed solver block {solver!r}") from e

    boundary_doc = document.get("boundary") or {"kind": "canonical_plus"}
    if not isinstance(boundary_doc, dict):
        raise InputError(f"boundary must be an object with a kind, got {boundary_doc!r}")
    boundary_doc = dict(boundary_doc)
    kind = boundary_doc.get("kind")
    if kind not in BOUNDARY_KINDS:
        raise InputError(f"Unknown boundary kind {kind!r}; expected one of {BOUNDARY_KINDS}")

    if kind == "model":
        model: ModelMetric = model_metric_data(
            lie, _floats(boundary_doc.get("beta"), "beta", rs.rank), boundary_doc.get("subset", ""),
            boundary_doc.get("m", []), t, logging=False,
        )
        return model.problem(grid, tol=tol, max_iter=max_iter)

    if not isinstance(document.get("higgs"), list):
        raise InputError("Problem document needs a 'higgs' list")
    higgs = HiggsCoefficient.from_list(rs, document["higgs"])
    placeholder = np.zeros((rs.rank,) + grid.shape)
    problem = TodaProblem(lie=lie, grid=grid, higgs=higgs, boundary=placeholder, t=t,
                          tol=tol, max_iter=max_iter, description={"boundary": boundary_doc})
    if kind == "constant":
        boundary = constant_boundary(grid, _floats(boundary_doc.get("values"), "values", rs.rank))
    else:
        delta = _floats(boundary_doc.get("delta", [0.0] * rs.rank), "delta", rs.rank)
        if higgs.is_constant:
            xi_can = canonical_xi(lie, [sum(term.coefficient for term in f) for f in higgs.terms])
            boundary = constant_boundary(grid, xi_can + delta)
        else:
            boundary = canonical_xi_field(problem) + delta.reshape((-1,) + (1,) * len(grid.shape))
    return problem.with_boundary(boundary)


def resolved_config(problem: TodaProblem) -> dict:
    """Problem document with every default filled in."""
    return {
        **problem.to_dict(),
        "solver": {
            "tol": SolverDefaults.TOL if problem.tol is None else problem.tol,
            "max_iter": SolverDefaults.MAX_ITER if problem.max_iter is None else problem.max_iter,
        },
    }


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, f".{SolverDefaults.FLOAT_DIGITS}g")


def jsonable(value: Any) -> Any:
    """Convert numpy, sympy and complex values into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, sympy.Basic):
        return str(value)
    return value


def _encode(value: Any) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(value[k])}" for k in sorted(value)) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    if isinstance(value, float):
        return _format_float(value)
    return json.dumps(value)


def dumps(payload: Any) -> str:
    """JSON with sorted keys and floats at full precision, newline-terminated."""
    return _encode(jsonable(payload)) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_float(float(v)) for v in row])
    return buffer.getvalue()


def write_text(text: str, path: Optional[Union[str, Path]] = None) -> None:
    """Write to ``path`` with '\\n' line endings, or to stdout when None."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def example_document(family: str = "A", rank: int = 1) -> Dict:
    """A small canonical-plus problem, handy as a template."""
    rs = build_root_system(SimpleType(family, rank))
    return {
        "algebra": {"family": family, "rank": rank},
        "domain": {"kind": "rectangle", "x_range": [-1, 1], "y_range": [-1, 1], "nx": 17, "ny": 17},
        "higgs": [{"root": label, "terms": [{"k": 0, "re": 1.0, "im": 0.0}]} for label in rs.labels],
        "boundary": {"kind": "canonical_plus", "delta": [0.0] * rank},
        "scale_t": 1.0,
        "solver": {"tol": SolverDefaults.TOL, "max_iter": SolverDefaults.MAX_ITER},
    }
