"""JSON file formats: state files, vector files and decomposition files.

Complex numbers are written as ``[re, im]`` pairs. Floats use Python's
shortest round-trip repr, so ``parse(serialize(x)) == x`` bit for bit.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import InvalidInput
from .qstate import ProductVector, WeightedDecomposition

DECOMPOSITION_FORMAT = "sepcanon.decomposition/1"


def _pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _unpair(p) -> complex:
    if not (isinstance(p, (list, tuple)) and len(p) == 2):
        raise InvalidInput(f"expected a [re, im] pair, got {p!r}")
    re, im = p
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
        raise InvalidInput(f"non-numeric entry {p!r}")
    return complex(float(re), float(im))


def vector_to_json(v) -> list[list[float]]:
    return [_pair(z) for z in np.asarray(v).ravel()]


def vector_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise InvalidInput("vector must be a non-empty list of [re, im] pairs")
    return np.array([_unpair(p) for p in data], dtype=complex)


def matrix_to_json(m) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InvalidInput("matrix must be a list of rows")
    return np.array([[_unpair(p) for p in row] for row in data], dtype=complex)


def _render(obj, depth: int) -> str:
    pad = "  " * (depth + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {_render(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(obj, list) and any(isinstance(x, dict) for x in obj):
        items = [pad + _render(x, depth + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    if isinstance(obj, list) and obj and all(isinstance(x, list) and x and isinstance(x[0], list) for x in obj):
        # matrix rows: one row per line
        items = [pad + json.dumps(x, allow_nan=False) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    return json.dumps(obj, allow_nan=False)


def dumps(obj) -> str:
    """Indented JSON with numeric arrays kept on one line."""
    return _render(obj, 0) + "\n"


def state_to_dict(m, dims=(2, 2)) -> dict:
    return {"dim_a": int(dims[0]), "dim_b": int(dims[1]), "matrix": matrix_to_json(m)}


def state_from_dict(data) -> tuple[np.ndarray, tuple[int, int]]:
    try:
        dims = (int(data["dim_a"]), int(data["dim_b"]))
        m = matrix_from_json(data["matrix"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed state file: {exc}") from exc
    d = dims[0] * dims[1]
    if m.shape != (d, d):
        raise InvalidInput(f"state file declares dims {dims} but matrix is {m.shape}")
    return m, dims


def vector_to_dict(v, dims=(2, 2)) -> dict:
    return {"dim_a": int(dims[0]), "dim_b": int(dims[1]), "vector": vector_to_json(v)}


def plane_to_dict(kind: str, v1, v2) -> dict:
    return {"dim_a": 2, "dim_b": 2, "plane": kind, "vectors": [vector_to_json(v1), vector_to_json(v2)]}


def decomposition_to_dict(d: WeightedDecomposition, metadata: dict | None = None) -> dict:
    return {
        "format": DECOMPOSITION_FORMAT,
        "dims": [int(d.dims[0]), int(d.dims[1])],
        "terms": [
            {"weight": float(w), "e": vector_to_json(pv.e), "f": vector_to_json(pv.f)} for w, pv in d.terms
        ],
        "metadata": metadata or {},
    }


def decomposition_from_dict(data) -> tuple[WeightedDecomposition, dict]:
    try:
        dims = tuple(int(x) for x in data["dims"])
        terms = []
        for t in data["terms"]:
            w = t["weight"]
            if not isinstance(w, (int, float)) or isinstance(w, bool):
                raise InvalidInput(f"non-numeric weight {w!r}")
            terms.append((float(w), ProductVector(vector_from_json(t["e"]), vector_from_json(t["f"]))))
        meta = data.get("metadata", {})
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed decomposition file: {exc}") from exc
    if len(dims) != 2:
        raise InvalidInput("dims must have two entries")
    return WeightedDecomposition(tuple(terms), dims), meta


def report_metadata(report, seed=None) -> dict:
    steps = [
        {
            "stage": s.stage,
            "kind": s.kind,
            "threshold": float(s.threshold),
            "ranks_before": list(s.ranks_before),
            "ranks_after": list(s.ranks_after),
            "e": vector_to_json(s.vector.e),
            "f": vector_to_json(s.vector.f),
        }
        for s in report.steps
    ]
    meta = {
        "verdict": report.verdict.verdict.value,
        "min_pt_eigenvalue": float(report.verdict.min_pt_eigenvalue),
        "reconstruction_error": float(report.reconstruction_error),
        "pbar": [float(x) for x in report.pbar] if report.pbar is not None else None,
        "steps": steps,
        "flags": list(report.flags),
        "fingerprint": report.fingerprint,
    }
    if report.schmidt is not None:
        meta["schmidt"] = [float(report.schmidt.c1), float(report.schmidt.c2)]
    if seed is not None:
        meta["seed"] = int(seed)
    return meta


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
