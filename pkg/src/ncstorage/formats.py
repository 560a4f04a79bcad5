"""JSON file formats: generator matrices, shares, repair plans."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .galois import FieldSpec, validate_field
from .linalg import GfMatrix
from .mdscodes import Family, GeneratorMatrix, MdsStatus
from .storage import Share


def field_from_json(obj: dict) -> FieldSpec:
    poly = obj.get("poly")
    if isinstance(poly, str):
        poly = int(poly, 0)
    return validate_field(int(obj["m"]), poly)


def matrix_to_json(g: GeneratorMatrix) -> dict:
    return {
        "n": g.n,
        "k": g.k,
        "field": g.spec.to_json(),
        "family": g.family.value,
        "rows": g.mat.tolist(),
    }


def matrix_from_json(obj: dict) -> GeneratorMatrix:
    spec = field_from_json(obj["field"])
    mat = GfMatrix.from_rows(spec, obj["rows"])
    n, k = obj.get("n", mat.rows), obj.get("k", mat.cols)
    if (n, k) != mat.shape:
        raise ValueError(f"header says ({n},{k}) but rows are {mat.shape}")
    return GeneratorMatrix(mat, Family(obj.get("family", "rs")), MdsStatus.UNVERIFIED)


def _digits(spec: FieldSpec) -> int:
    return 1 if spec.m <= 4 else 2


def payload_to_hex(payload, spec: FieldSpec) -> str:
    w = _digits(spec)
    return "".join(f"{s:0{w}x}" for s in payload)


def payload_from_hex(text: str, spec: FieldSpec) -> tuple[int, ...]:
    w = _digits(spec)
    if len(text) % w:
        raise ValueError("hex payload length is not a whole number of symbols")
    return tuple(int(text[i:i + w], 16) for i in range(0, len(text), w))


def share_to_json(share: Share, **extra: Any) -> dict:
    out = {
        "index": share.index,
        "coding_vector": list(share.coding_vector),
        "field": share.spec.to_json(),
        "payload": payload_to_hex(share.payload, share.spec),
    }
    out.update(extra)
    return out


def share_from_json(obj: dict) -> Share:
    spec = field_from_json(obj["field"])
    return Share(
        int(obj["index"]),
        tuple(int(v) for v in obj["coding_vector"]),
        payload_from_hex(obj["payload"], spec),
        spec,
    )


def read_json(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def write_json(obj: Any, path: str | Path | None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
