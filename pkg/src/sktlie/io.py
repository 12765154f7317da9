"""File format and canonical serialization.

Input schema (JSON object):

    {
      "dim": n,
      "d": {"k": [[coeff, i, j], ...], ...},   # terms of de^k, 1-based i < j
      "J": [[...]],                            # optional, column convention
      "Jminus": [[...]],                       # optional second structure
      "metric": [[...]],                       # optional Gram matrix
      "tolerance": 1e-9                        # optional
    }

Canonical serialization is UTF-8 JSON with sorted keys and Python's
shortest-round-trip float formatting; `digest` hashes that byte stream, so
identical mathematical content always maps to the same digest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .liealg import LieAlgebra
from .multilinear import KForm

__all__ = [
    "AlgebraInput",
    "parse_algebra_input",
    "load_algebra_file",
    "algebra_to_dict",
    "canonical_json",
    "digest",
]


@dataclass(frozen=True)
class AlgebraInput:
    """Parsed but not yet mathematically validated input data."""

    dim: int
    differentials: list  # of KForm, one per coframe element
    J: np.ndarray | None
    J_minus: np.ndarray | None
    metric: np.ndarray | None
    tolerance: float | None
    raw: dict

    def algebra(self, check: bool = True) -> LieAlgebra:
        return LieAlgebra(self.differentials, check=check)


def _fail(location: str, message: str):
    raise InvalidInputError(f"{location}: {message}")


def _parse_matrix(obj, n: int, location: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != n:
        _fail(location, f"expected a {n}x{n} matrix (list of {n} rows)")
    rows = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            _fail(f"{location}[{r}]", f"expected a row of {n} numbers")
        try:
            rows.append([float(v) for v in row])
        except (TypeError, ValueError):
            _fail(f"{location}[{r}]", "non-numeric entry")
    return np.array(rows)


def parse_algebra_input(data: dict) -> AlgebraInput:
    """Validate the schema (shapes, index ranges, types); mathematical
    properties (Jacobi, J^2 = -id, positivity) are checked downstream."""
    if not isinstance(data, dict):
        _fail("$", "top-level value must be an object")
    if "dim" not in data:
        _fail("$.dim", "missing")
    dim = data["dim"]
    if not isinstance(dim, int) or dim <= 0:
        _fail("$.dim", f"must be a positive integer, got {dim!r}")
    d_data = data.get("d", {})
    if not isinstance(d_data, dict):
        _fail("$.d", "must be an object mapping k to term lists")
    differentials = []
    for k in range(1, dim + 1):
        terms = {}
        raw_terms = d_data.get(str(k), [])
        if not isinstance(raw_terms, list):
            _fail(f"$.d.{k}", "must be a list of [coeff, i, j] terms")
        for idx, term in enumerate(raw_terms):
            loc = f"$.d.{k}[{idx}]"
            if not isinstance(term, list) or len(term) != 3:
                _fail(loc, "expected [coeff, i, j]")
            coeff, i, j = term
            if not isinstance(i, int) or not isinstance(j, int):
                _fail(loc, "indices must be integers")
            if not (1 <= i < j <= dim):
                _fail(loc, f"need 1 <= i < j <= {dim}, got ({i}, {j})")
            try:
                coeff = float(coeff)
            except (TypeError, ValueError):
                _fail(loc, "coefficient is not a number")
            terms[(i, j)] = terms.get((i, j), 0.0) + coeff
        differentials.append(KForm.from_terms(dim, 2, terms))
    unknown = set(d_data) - {str(k) for k in range(1, dim + 1)}
    if unknown:
        _fail("$.d", f"unknown coframe labels: {sorted(unknown)}")

    J = J_minus = metric = None
    if data.get("J") is not None:
        if dim % 2:
            _fail("$.J", f"a complex structure needs even dimension, got dim {dim}")
        J = _parse_matrix(data["J"], dim, "$.J")
    if data.get("Jminus") is not None:
        if J is None:
            _fail("$.Jminus", "Jminus given without J")
        J_minus = _parse_matrix(data["Jminus"], dim, "$.Jminus")
    if data.get("metric") is not None:
        metric = _parse_matrix(data["metric"], dim, "$.metric")
    tol = data.get("tolerance")
    if tol is not None:
        try:
            tol = float(tol)
        except (TypeError, ValueError):
            _fail("$.tolerance", "must be a number")
        if not tol > 0:
            _fail("$.tolerance", "must be positive")
    known = {"dim", "d", "J", "Jminus", "metric", "tolerance"}
    extra = set(data) - known
    if extra:
        _fail("$", f"unknown fields: {sorted(extra)}")
    return AlgebraInput(
        dim=dim, differentials=differentials, J=J, J_minus=J_minus,
        metric=metric, tolerance=tol, raw=data,
    )


def load_algebra_file(path: str) -> AlgebraInput:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: malformed JSON ({exc})") from exc
    return parse_algebra_input(data)


def _matrix_to_lists(M: np.ndarray) -> list:
    return [[float(v) for v in row] for row in M]


def algebra_to_dict(L: LieAlgebra, J=None, J_minus=None, metric=None,
                    tolerance: float | None = None, prune_tol: float = 1e-12) -> dict:
    """Serialize in the input schema; term lists follow canonical
    (lexicographic, strictly increasing) multi-index order."""
    d_data = {}
    for k, form in enumerate(L.differentials, start=1):
        terms = [[c, int(i), int(j)] for (i, j), c in form.terms(tol=prune_tol)]
        if terms:
            d_data[str(k)] = terms
    out: dict = {"dim": L.dim, "d": d_data}
    if J is not None:
        out["J"] = _matrix_to_lists(np.asarray(J, dtype=float))
    if J_minus is not None:
        out["Jminus"] = _matrix_to_lists(np.asarray(J_minus, dtype=float))
    if metric is not None:
        out["metric"] = _matrix_to_lists(np.asarray(metric, dtype=float))
    if tolerance is not None:
        out["tolerance"] = tolerance
    return out


def canonical_json(obj) -> str:
    """Bit-stable rendering: sorted keys, minimal separators, repr floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
                      allow_nan=False)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
