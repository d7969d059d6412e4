"""Deterministic JSON output and tensor files.

Floats are written with 17 significant digits so every value round-trips
exactly; keys are sorted.  Tensor files are JSON lines: a header line
followed by one line per entry in canonical order.
"""

from __future__ import annotations

import hashlib
import json
import math
from numbers import Integral, Real
from pathlib import Path

import numpy as np

from .coupling import DTensor, EtaMatrix, StructureTensor
from .harmonics import HarmonicBasis


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int | None = None, _level: int = 0) -> str:
    """json.dumps with sorted keys and 17-digit floats."""
    nl = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (Integral, np.integer)):
        return str(int(obj))
    if isinstance(obj, (Real, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{nl}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}"
                 for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{nl}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[" + sep.join(items) + end + "]"
    if hasattr(obj, "to_json"):
        return dumps(obj.to_json(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(dumps(cfg).encode()).hexdigest()


def _num(z: complex, digits: int | None) -> tuple[float, float]:
    re, im = float(z.real), float(z.imag)
    if digits is not None:
        re, im = round(re, digits) + 0.0, round(im, digits) + 0.0
    return re, im


def _header(kind: str, basis: HarmonicBasis, extra: dict) -> dict:
    h = {"kind": kind, "manifold": basis.manifold.name, "manifest_hash": basis.manifest_hash,
         "cutoff": basis.cutoff, "label_names": list(basis.label_names)}
    h.update(extra)
    return {"header": h}


def _lab(basis: HarmonicBasis, i: int) -> list[int]:
    return list(basis.indices[i].labels)


def tensor_lines(obj, header_extra: dict | None = None, digits: int | None = None) -> list[str]:
    """JSON lines for a StructureTensor, EtaMatrix or DTensor."""
    extra = dict(header_extra or {})
    b = obj.basis
    lines = []
    if isinstance(obj, StructureTensor):
        extra.update({"degree_cap": obj.degree_cap, "exactness": obj.exactness})
        lines.append(dumps(_header("c", b, extra)))
        for i, j, k, v in obj.entries():
            re, im = _num(v, digits)
            if re or im:
                lines.append(dumps({"I": _lab(b, i), "J": _lab(b, j), "K": _lab(b, k), "re": re, "im": im}))
    elif isinstance(obj, EtaMatrix):
        lines.append(dumps(_header("eta", b, extra)))
        for i, j, v in obj.entries():
            re, im = _num(v, digits)
            lines.append(dumps({"I": _lab(b, i), "J": _lab(b, j), "re": re, "im": im}))
    elif isinstance(obj, DTensor):
        extra.update({"axis": obj.axis_name, "periodic": obj.periodic, "antisymmetric": obj.antisymmetric})
        lines.append(dumps(_header("d", b, extra)))
        for i, j, v in obj.entries():
            re, im = _num(v, digits)
            if re or im:
                lines.append(dumps({"I": _lab(b, i), "J": _lab(b, j), "re": re, "im": im}))
    else:
        raise TypeError(f"not a tensor: {type(obj).__name__}")
    return lines


def write_tensor(path, obj, header_extra: dict | None = None, digits: int | None = None) -> Path:
    path = Path(path)
    path.write_text("\n".join(tensor_lines(obj, header_extra, digits)) + "\n", encoding="utf-8")
    return path


def _read_lines(path) -> tuple[dict, list[dict]]:
    rows = [json.loads(line) for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    if not rows or "header" not in rows[0]:
        raise ValueError(f"{path}: missing header line")
    return rows[0]["header"], rows[1:]


def _check_header(h: dict, basis: HarmonicBasis, kind: str, path) -> None:
    if h.get("kind") != kind:
        raise ValueError(f"{path}: expected a {kind} tensor, found {h.get('kind')}")
    if h.get("manifest_hash") != basis.manifest_hash:
        raise ValueError(f"{path}: tensor was computed for a different basis")


def read_structure_tensor(path, basis: HarmonicBasis) -> StructureTensor:
    h, rows = _read_lines(path)
    _check_header(h, basis, "c", path)
    out = StructureTensor(basis, int(h["degree_cap"]), int(h["exactness"]))
    for r in rows:
        i, j, k = (basis.position[tuple(r[key])] for key in ("I", "J", "K"))
        if i > j:
            i, j = j, i
        out.rows.setdefault((i, j), {})[k] = complex(r["re"], r["im"])
    return out


def read_eta(path, basis: HarmonicBasis) -> EtaMatrix:
    h, rows = _read_lines(path)
    _check_header(h, basis, "eta", path)
    fwd = {}
    for r in rows:
        fwd[basis.position[tuple(r["I"])]] = (basis.position[tuple(r["J"])], complex(r["re"], r["im"]))
    inv = {j: (i, 1 / v) for i, (j, v) in fwd.items()}
    return EtaMatrix(basis, fwd, inv)


def read_d(path, basis: HarmonicBasis) -> DTensor:
    h, rows = _read_lines(path)
    _check_header(h, basis, "d", path)
    names = [a.name for a in basis.manifold.axes]
    ent = {(basis.position[tuple(r["I"])], basis.position[tuple(r["J"])]): complex(r["re"], r["im"]) for r in rows}
    return DTensor(basis, names.index(h["axis"]), h["axis"], bool(h["periodic"]), ent, bool(h["antisymmetric"]))
