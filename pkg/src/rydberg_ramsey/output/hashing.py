# --- output/hashing.py ---
from __future__ import annotations
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np


def to_jsonable(obj: Any) -> Any:
    """
    Plain-JSON copy of `obj`: numpy scalars and arrays become Python numbers and
    lists, tuples become lists, non-finite floats become None.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": to_jsonable(obj.real), "imag": to_jsonable(obj.imag)}
    return obj


def canonical_json(obj: Any) -> str:
    """Sorted keys, no whitespace: the byte form that gets hashed."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def content_hash(obj: Any) -> str:
    """sha256 of the canonical JSON framed like a git blob ("blob <size>\\0" + bytes)."""
    payload = canonical_json(obj).encode("utf-8")
    return hashlib.sha256(b"blob %d\0" % len(payload) + payload).hexdigest()


def file_sha256(path: Union[str, Path]) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()
