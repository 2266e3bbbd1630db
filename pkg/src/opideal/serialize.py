"""JSON and CSV schemas shared by the command-line tools.

Matrix JSON: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` with the
data flat in row-major order.  Flag JSON wraps a matrix plus the nested
dimensions; group JSON carries the Cayley table; sequences are CSV with
one nonnegative real per line.
"""

from __future__ import annotations

import json

import numpy as np

from .amenable import (FiniteGroup, Functional, cyclic_group, dihedral_group,
                       quaternion_group, symmetric_group, trivial_group)
from .classical import StructureData, default_structure
from .errors import InputError
from .nest import Flag
from .symfunc import NonincreasingSequence
from .utils import as_matrix

__all__ = [
    "matrix_to_obj", "matrix_from_obj", "save_matrix", "load_matrix",
    "flag_to_obj", "flag_from_obj", "save_flag", "load_flag",
    "sequence_to_csv", "sequence_from_csv", "save_sequence", "load_sequence",
    "group_from_obj", "load_group", "resolve_group",
    "functional_from_obj", "load_functional",
    "structure_from_obj", "load_structure",
]


def _require(obj: dict, field: str, kind=None):
    if field not in obj:
        raise InputError(f"missing field {field!r}")
    val = obj[field]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"field {field!r} has wrong type")
    return val


def matrix_to_obj(m) -> dict:
    m = as_matrix(m)
    data = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InputError("matrix object must be a JSON object")
    rows = _require(obj, "rows", int)
    cols = _require(obj, "cols", int)
    data = _require(obj, "data", list)
    if rows < 1 or cols < 1:
        raise InputError("field 'rows'/'cols' must be positive")
    if len(data) != rows * cols:
        raise InputError(
            f"field 'data' has {len(data)} entries, expected rows*cols={rows * cols}")
    flat = []
    for i, pair in enumerate(data):
        if (not isinstance(pair, (list, tuple))) or len(pair) != 2:
            raise InputError(f"field 'data' entry {i} is not an [re, im] pair")
        flat.append(complex(float(pair[0]), float(pair[1])))
    return as_matrix(np.array(flat, dtype=complex).reshape(rows, cols))


def save_matrix(path, m) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_obj(m), fh)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_obj(json.load(fh))


def flag_to_obj(flag: Flag) -> dict:
    return {"basis": matrix_to_obj(flag.basis), "dims": list(flag.dims)}


def flag_from_obj(obj) -> Flag:
    if not isinstance(obj, dict):
        raise InputError("flag object must be a JSON object")
    basis = matrix_from_obj(_require(obj, "basis", dict))
    dims = _require(obj, "dims", list)
    return Flag(basis, dims)


def save_flag(path, flag: Flag) -> None:
    with open(path, "w") as fh:
        json.dump(flag_to_obj(flag), fh)


def load_flag(path) -> Flag:
    with open(path) as fh:
        return flag_from_obj(json.load(fh))


def sequence_to_csv(seq) -> str:
    values = seq.values if isinstance(seq, NonincreasingSequence) else np.asarray(seq)
    return "".join(f"{float(v)!r}\n" for v in values)


def sequence_from_csv(text: str) -> NonincreasingSequence:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise InputError(f"sequence line {lineno} is not a number: {line!r}") from None
    return NonincreasingSequence(values)


def save_sequence(path, seq) -> None:
    with open(path, "w") as fh:
        fh.write(sequence_to_csv(seq))


def load_sequence(path) -> NonincreasingSequence:
    with open(path) as fh:
        return sequence_from_csv(fh.read())


def group_from_obj(obj) -> FiniteGroup:
    if not isinstance(obj, dict):
        raise InputError("group object must be a JSON object")
    order = _require(obj, "order", int)
    table = _require(obj, "table", list)
    if len(table) != order:
        raise InputError(f"field 'table' has {len(table)} rows, expected {order}")
    labels = obj.get("labels")
    return FiniteGroup(table, labels=labels)


def load_group(path) -> FiniteGroup:
    with open(path) as fh:
        return group_from_obj(json.load(fh))


_BUILTIN_GROUPS = {
    "trivial": trivial_group,
    "s3": lambda: symmetric_group(3),
    "s4": lambda: symmetric_group(4),
    "q8": quaternion_group,
}


def resolve_group(spec: str) -> FiniteGroup:
    """A builtin name (z<n>, d<n>, s3, s4, q8, trivial) or a JSON path."""
    name = spec.strip().lower()
    if name in _BUILTIN_GROUPS:
        return _BUILTIN_GROUPS[name]()
    if name.startswith("z") and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    if name.startswith("d") and name[1:].isdigit():
        return dihedral_group(int(name[1:]))
    try:
        return load_group(spec)
    except OSError:
        raise InputError(f"unknown group {spec!r} (not a builtin, not a file)") from None


def functional_from_obj(obj, group: FiniteGroup) -> Functional:
    if not isinstance(obj, dict):
        raise InputError("functional object must be a JSON object")
    data = _require(obj, "weights", list)
    weights = []
    for i, pair in enumerate(data):
        if (not isinstance(pair, (list, tuple))) or len(pair) != 2:
            raise InputError(f"field 'weights' entry {i} is not an [re, im] pair")
        weights.append(complex(float(pair[0]), float(pair[1])))
    return Functional(group, weights)


def load_functional(path, group: FiniteGroup) -> Functional:
    with open(path) as fh:
        return functional_from_obj(json.load(fh), group)


def structure_from_obj(obj) -> tuple[str, StructureData]:
    if not isinstance(obj, dict):
        raise InputError("structure object must be a JSON object")
    typ = _require(obj, "type", str)
    n = _require(obj, "n", int)
    split = obj.get("split")
    if split is not None:
        if not isinstance(split, list) or len(split) != 2:
            raise InputError("field 'split' must be a pair [p, q]")
        split = (int(split[0]), int(split[1]))
    return typ, default_structure(typ, n, split=split)


def load_structure(path) -> tuple[str, StructureData]:
    with open(path) as fh:
        return structure_from_obj(json.load(fh))
