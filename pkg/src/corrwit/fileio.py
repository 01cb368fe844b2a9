"""Matrix files: UTF-8 JSON with split real/imaginary row-major arrays.

Every float is written with 17 significant digits in a fixed layout, so
reading a file and writing it back reproduces it byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .povm import Povm

__all__ = [
    "SCHEMA_VERSION",
    "FileFormatError",
    "matrix_record",
    "povm_record",
    "parse_matrix",
    "parse_povm",
    "dumps",
    "write_json",
    "read_json",
    "write_matrix_file",
    "read_matrix_file",
    "write_povm_file",
    "read_povm_file",
]

SCHEMA_VERSION = "1"
MATRIX_KINDS = ("state", "direction", "unitary")


class FileFormatError(ValueError):
    pass


def _fmt_float(x: float) -> str:
    if not np.isfinite(x):
        raise FileFormatError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".16e")


def _emit(obj, indent: int) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_emit(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (float, np.floating)) for v in obj) and obj:
            return "[" + ", ".join(_fmt_float(v) for v in obj) + "]"
        if not obj:
            return "[]"
        items = [pad + "  " + _emit(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def dumps(obj) -> str:
    return _emit(obj, 0) + "\n"


def _split(x: np.ndarray) -> dict:
    x = np.asarray(x, dtype=complex)
    return {"re": [float(v) for v in x.real.ravel()], "im": [float(v) for v in x.imag.ravel()]}


def matrix_record(x, kind: str, d: int) -> dict:
    if kind not in MATRIX_KINDS:
        raise FileFormatError(f"unknown matrix kind {kind!r}")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "d": int(d), **_split(x)}


def povm_record(povm: Povm, d: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "povm",
        "d": int(d),
        "elements": [_split(e) for e in povm.elements],
    }


def _join(rec, n: int) -> np.ndarray:
    try:
        re = np.asarray(rec["re"], dtype=float)
        im = np.asarray(rec["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed re/im arrays: {exc}") from exc
    if re.shape != (n * n,) or im.shape != (n * n,):
        raise FileFormatError(f"expected {n * n} entries, got re={re.size}, im={im.size}")
    return (re + 1j * im).reshape(n, n)


def _header(rec, kinds) -> tuple[str, int]:
    if not isinstance(rec, dict):
        raise FileFormatError("top-level value must be an object")
    if rec.get("schema_version") != SCHEMA_VERSION:
        raise FileFormatError(f"unsupported schema_version {rec.get('schema_version')!r}")
    kind = rec.get("kind")
    if kind not in kinds:
        raise FileFormatError(f"expected kind in {kinds}, got {kind!r}")
    d = rec.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise FileFormatError(f"invalid local dimension {d!r}")
    return kind, d


def parse_matrix(rec, kinds=MATRIX_KINDS) -> tuple[str, int, np.ndarray]:
    kind, d = _header(rec, kinds)
    n = d if kind == "unitary" else d * d
    return kind, d, _join(rec, n)


def parse_povm(rec) -> tuple[int, list[np.ndarray]]:
    _, d = _header(rec, ("povm",))
    elems = rec.get("elements")
    if not isinstance(elems, list) or not elems:
        raise FileFormatError("povm file needs a nonempty 'elements' list")
    return d, [_join(e, d * d) for e in elems]


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from exc


def write_matrix_file(path, x, kind: str, d: int) -> None:
    write_json(path, matrix_record(x, kind, d))


def read_matrix_file(path, kinds=MATRIX_KINDS) -> tuple[str, int, np.ndarray]:
    return parse_matrix(read_json(path), kinds)


def write_povm_file(path, povm: Povm, d: int) -> None:
    write_json(path, povm_record(povm, d))


def read_povm_file(path) -> tuple[int, list[np.ndarray]]:
    return parse_povm(read_json(path))
