"""Reading and writing group description files.

A file is a JSON object::

    {"ring": {"p": 5, "n": 1, "b": 1, "poly": [0, 1]},
     "generators": [[[[1], [1]], [[0], [1]]], ...]}

Each generator is a 2x2 row-major matrix whose entries are coefficient
vectors of length b, constant term first.  When b = 1 a bare integer is
accepted in place of a one-element vector.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import GroupFileError, LocohError
from .groups import FiniteMatrixGroup, closure
from .ring import RingSpec, make_ring


def parse_ring(obj) -> RingSpec:
    if not isinstance(obj, dict):
        raise GroupFileError("'ring' must be an object with fields p, n, b, poly")
    try:
        p = int(obj["p"])
    except (KeyError, TypeError, ValueError):
        raise GroupFileError("'ring.p' is missing or not an integer") from None
    n = int(obj.get("n", 1))
    b = int(obj.get("b", 1))
    poly = obj.get("poly")
    if poly is not None and (not isinstance(poly, list) or not all(isinstance(c, int) for c in poly)):
        raise GroupFileError("'ring.poly' must be a list of integers, constant term first")
    try:
        return make_ring(p, n, b, poly)
    except LocohError:
        raise
    except ValueError as exc:
        raise GroupFileError(f"bad ring: {exc}") from None


def _entry(x, b: int, where: str) -> list[int]:
    if isinstance(x, int) and b == 1:
        return [x]
    if not isinstance(x, list) or len(x) != b or not all(isinstance(c, int) for c in x):
        raise GroupFileError(f"{where}: expected a coefficient vector of length {b}")
    return x


def parse_generator(obj, b: int, index: int) -> np.ndarray:
    where = f"generator {index}"
    if not isinstance(obj, list) or len(obj) != 2:
        raise GroupFileError(f"{where}: expected 2 rows, got {len(obj) if isinstance(obj, list) else type(obj).__name__}")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != 2:
            n = len(row) if isinstance(row, list) else type(row).__name__
            raise GroupFileError(f"{where}: row {i} must have 2 entries, got {n}")
        rows.append([_entry(x, b, f"{where}, entry ({i},{j})") for j, x in enumerate(row)])
    return np.array(rows, dtype=np.int64)


def loads(text: str) -> tuple[RingSpec, list[np.ndarray]]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict) or "ring" not in obj:
        raise GroupFileError("top level must be an object with 'ring' and 'generators'")
    spec = parse_ring(obj["ring"])
    gens = obj.get("generators", [])
    if not isinstance(gens, list):
        raise GroupFileError("'generators' must be a list")
    return spec, [parse_generator(g, spec.b, k) for k, g in enumerate(gens)]


def load(path) -> tuple[RingSpec, list[np.ndarray]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GroupFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def load_group(path, cap: int | None = None) -> FiniteMatrixGroup:
    spec, gens = load(path)
    return closure(spec, gens) if cap is None else closure(spec, gens, cap=cap)


def dumps(spec: RingSpec, generators) -> str:
    gens = [np.asarray(g).reshape(2, 2, spec.b).tolist() for g in generators]
    return json.dumps({"ring": spec.to_dict(), "generators": gens})


__all__ = ["load", "loads", "load_group", "dumps", "parse_ring", "parse_generator"]
