"""JSON wire formats for models and reports.

Complex scalars travel as two-element ``[re, im]`` arrays and matrices as
row-major nested arrays. Model files carry a mandatory ``kind`` field naming
the payload shape; schema violations report the JSON path of the offending
entry, malformed JSON reports line and column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classical import ClassicalInstrument, ClassicalOperation
from .compatibility import ExclusionWitness
from .errors import ModelParseError, SchemaError
from .instruments import Instrument
from .operations import DensityState, QuantumOperation, pure_state

SCHEMA_VERSION = "qcomplement/1"

MODEL_KINDS = ("quantum-instrument", "classical-instrument", "state", "witness")


def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_lists(m) -> list[list[list[float]]]:
    arr = np.asarray(m, dtype=complex)
    return [[complex_to_pair(v) for v in row] for row in arr]


def real_matrix_to_lists(m) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(m, dtype=float)]


def _expect(condition: bool, message: str, path: str):
    if not condition:
        raise SchemaError(message, path)


def complex_from_pair(data, path: str) -> complex:
    _expect(
        isinstance(data, (list, tuple)) and len(data) == 2,
        "complex entries must be two-element [re, im] arrays",
        path,
    )
    re, im = data
    _expect(
        isinstance(re, (int, float)) and isinstance(im, (int, float)),
        "complex entry parts must be numbers",
        path,
    )
    return complex(re, im)


def matrix_from_lists(data, path: str) -> np.ndarray:
    _expect(isinstance(data, list) and data, "matrix must be a nonempty array of rows", path)
    rows = []
    width = None
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and row, "matrix rows must be nonempty arrays", f"{path}[{i}]")
        if width is None:
            width = len(row)
        _expect(len(row) == width, "matrix rows must share one length", f"{path}[{i}]")
        rows.append([complex_from_pair(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows, dtype=complex)


def real_matrix_from_lists(data, path: str) -> np.ndarray:
    _expect(isinstance(data, list) and data, "matrix must be a nonempty array of rows", path)
    rows = []
    width = None
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and row, "matrix rows must be nonempty arrays", f"{path}[{i}]")
        if width is None:
            width = len(row)
        _expect(len(row) == width, "matrix rows must share one length", f"{path}[{i}]")
        for j, v in enumerate(row):
            _expect(isinstance(v, (int, float)), "entries must be numbers", f"{path}[{i}][{j}]")
        rows.append([float(v) for v in row])
    return np.array(rows, dtype=float)


def _expect_count(data, key: str, path: str) -> int:
    _expect(key in data, f"missing field {key!r}", path)
    value = data[key]
    _expect(isinstance(value, int) and value >= 1, f"{key!r} must be a positive integer", f"{path}.{key}")
    return value


def operation_to_dict(op: QuantumOperation) -> dict:
    return {
        "dim_in": op.dim_in,
        "dim_out": op.dim_out,
        "kraus": [matrix_to_lists(k) for k in op.kraus],
    }


def operation_from_dict(data, path: str = "$") -> QuantumOperation:
    _expect(isinstance(data, dict), "operation must be an object", path)
    dim_in = _expect_count(data, "dim_in", path)
    dim_out = _expect_count(data, "dim_out", path)
    _expect(
        isinstance(data.get("kraus"), list) and data["kraus"],
        "'kraus' must be a nonempty array of matrices",
        f"{path}.kraus",
    )
    mats = tuple(
        matrix_from_lists(entry, f"{path}.kraus[{i}]") for i, entry in enumerate(data["kraus"])
    )
    for i, k in enumerate(mats):
        _expect(
            k.shape == (dim_out, dim_in),
            f"kraus matrix has shape {k.shape}, expected ({dim_out}, {dim_in})",
            f"{path}.kraus[{i}]",
        )
    return QuantumOperation(dim_in, dim_out, mats)


def instrument_to_dict(ins: Instrument) -> dict:
    return {
        "type": "quantum",
        "dim_in": ins.dim_in,
        "dim_out": ins.dim_out,
        "outcomes": [
            {"label": label, "kraus": [matrix_to_lists(k) for k in op.kraus]}
            for label, op in ins.outcomes.items()
        ],
    }


def instrument_from_dict(data, path: str = "$") -> Instrument:
    _expect(isinstance(data, dict), "instrument must be an object", path)
    _expect(data.get("type", "quantum") == "quantum", "'type' must be 'quantum'", f"{path}.type")
    dim_in = _expect_count(data, "dim_in", path)
    dim_out = _expect_count(data, "dim_out", path)
    entries = data.get("outcomes")
    _expect(isinstance(entries, list) and entries, "'outcomes' must be a nonempty array", f"{path}.outcomes")
    outcomes: dict[str, QuantumOperation] = {}
    for i, entry in enumerate(entries):
        here = f"{path}.outcomes[{i}]"
        _expect(isinstance(entry, dict), "outcome must be an object", here)
        label = entry.get("label")
        _expect(isinstance(label, str) and label, "'label' must be a nonempty string", f"{here}.label")
        _expect(label not in outcomes, f"duplicate outcome label {label!r}", f"{here}.label")
        op = operation_from_dict(
            {"dim_in": dim_in, "dim_out": dim_out, "kraus": entry.get("kraus")}, here
        )
        outcomes[label] = op
    return Instrument(dim_in, dim_out, outcomes)


def classical_instrument_to_dict(ins: ClassicalInstrument) -> dict:
    return {
        "type": "classical",
        "size_in": ins.size_in,
        "size_out": ins.size_out,
        "outcomes": [
            {"label": label, "matrix": real_matrix_to_lists(op.matrix)}
            for label, op in ins.outcomes.items()
        ],
    }


def classical_instrument_from_dict(data, path: str = "$") -> ClassicalInstrument:
    _expect(isinstance(data, dict), "instrument must be an object", path)
    _expect(data.get("type", "classical") == "classical", "'type' must be 'classical'", f"{path}.type")
    size_in = _expect_count(data, "size_in", path)
    size_out = _expect_count(data, "size_out", path)
    entries = data.get("outcomes")
    _expect(isinstance(entries, list) and entries, "'outcomes' must be a nonempty array", f"{path}.outcomes")
    outcomes: dict[str, ClassicalOperation] = {}
    for i, entry in enumerate(entries):
        here = f"{path}.outcomes[{i}]"
        _expect(isinstance(entry, dict), "outcome must be an object", here)
        label = entry.get("label")
        _expect(isinstance(label, str) and label, "'label' must be a nonempty string", f"{here}.label")
        _expect(label not in outcomes, f"duplicate outcome label {label!r}", f"{here}.label")
        mat = real_matrix_from_lists(entry.get("matrix"), f"{here}.matrix")
        _expect(
            mat.shape == (size_out, size_in),
            f"matrix has shape {mat.shape}, expected ({size_out}, {size_in})",
            f"{here}.matrix",
        )
        outcomes[label] = ClassicalOperation(size_in, size_out, mat)
    return ClassicalInstrument(size_in, size_out, outcomes)


def state_to_dict(state: DensityState) -> dict:
    return {"dims": list(state.dims), "matrix": matrix_to_lists(state.matrix)}


def state_from_dict(data, path: str = "$") -> DensityState:
    _expect(isinstance(data, dict), "state must be an object", path)
    dims = data.get("dims")
    _expect(
        isinstance(dims, list) and dims and all(isinstance(d, int) and d >= 1 for d in dims),
        "'dims' must be a nonempty array of positive integers",
        f"{path}.dims",
    )
    has_matrix = "matrix" in data
    has_vector = "vector" in data
    _expect(has_matrix != has_vector, "state needs exactly one of 'matrix' or 'vector'", path)
    if has_vector:
        raw = data["vector"]
        _expect(isinstance(raw, list) and raw, "'vector' must be a nonempty array", f"{path}.vector")
        vec = np.array(
            [complex_from_pair(v, f"{path}.vector[{i}]") for i, v in enumerate(raw)]
        )
        return pure_state(vec, dims)
    return DensityState(tuple(dims), matrix_from_lists(data["matrix"], f"{path}.matrix"))


def witness_to_dict(w: ExclusionWitness) -> dict:
    c_dict = instrument_to_dict(w.c)
    c_dict["dims_out"] = list(w.dims_out)
    return {
        "C": c_dict,
        "partition": {x: list(zs) for x, zs in w.partition.items()},
        "post": {z: instrument_to_dict(ins) for z, ins in w.post.items()},
    }


def witness_from_dict(data, path: str = "$") -> ExclusionWitness:
    _expect(isinstance(data, dict), "witness must be an object", path)
    _expect(isinstance(data.get("C"), dict), "missing realisation instrument 'C'", f"{path}.C")
    dims_out = data["C"].get("dims_out")
    _expect(
        isinstance(dims_out, list)
        and len(dims_out) == 2
        and all(isinstance(d, int) and d >= 1 for d in dims_out),
        "'dims_out' must be a two-element array of positive integers",
        f"{path}.C.dims_out",
    )
    c = instrument_from_dict(data["C"], f"{path}.C")
    raw_partition = data.get("partition")
    _expect(isinstance(raw_partition, dict) and raw_partition, "'partition' must be a nonempty object", f"{path}.partition")
    partition = {}
    for x, zs in raw_partition.items():
        _expect(
            isinstance(zs, list) and zs and all(isinstance(z, str) for z in zs),
            "partition blocks must be nonempty arrays of outcome labels",
            f"{path}.partition.{x}",
        )
        partition[x] = tuple(zs)
    raw_post = data.get("post")
    _expect(isinstance(raw_post, dict) and raw_post, "'post' must be a nonempty object", f"{path}.post")
    post = {
        z: instrument_from_dict(entry, f"{path}.post.{z}") for z, entry in raw_post.items()
    }
    return ExclusionWitness(c=c, dims_out=(dims_out[0], dims_out[1]), partition=partition, post=post)


@dataclass(frozen=True)
class ModelFile:
    kind: str
    value: object


_PARSERS = {
    "quantum-instrument": instrument_from_dict,
    "classical-instrument": classical_instrument_from_dict,
    "state": state_from_dict,
    "witness": witness_from_dict,
}

_SERIALIZERS = {
    Instrument: ("quantum-instrument", instrument_to_dict),
    ClassicalInstrument: ("classical-instrument", classical_instrument_to_dict),
    DensityState: ("state", state_to_dict),
    ExclusionWitness: ("witness", witness_to_dict),
}


def model_to_dict(value) -> dict:
    for cls, (kind, serializer) in _SERIALIZERS.items():
        if isinstance(value, cls):
            return {"kind": kind, **serializer(value)}
    raise TypeError(f"cannot serialise {type(value).__name__} as a model")


def model_from_text(text: str) -> ModelFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise SchemaError("model document must be a JSON object", "$")
    kind = data.get("kind")
    if kind is None:
        raise SchemaError("missing mandatory 'kind' field", "$.kind")
    if kind not in _PARSERS:
        raise SchemaError(
            f"unknown kind {kind!r}, expected one of {list(_PARSERS)}", "$.kind"
        )
    payload = {key: value for key, value in data.items() if key != "kind"}
    return ModelFile(kind=kind, value=_PARSERS[kind](payload))


def model_from_path(path) -> ModelFile:
    text = Path(path).read_text()
    return model_from_text(text)


def parse_model(source) -> ModelFile:
    """Parse a model from a path or from raw JSON text."""
    text = str(source)
    if text.lstrip().startswith("{"):
        return model_from_text(text)
    return model_from_path(text)
