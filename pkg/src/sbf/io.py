"""Output helpers: metadata headers, fixed-precision CSV and JSON."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from . import __version__


def fmt(x) -> str:
    """17 significant digits in scientific notation (bit-stable round trip)."""
    if isinstance(x, (bool,)):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def content_hash(data: bytes) -> str:
    """Git-style blob hash (``blob <len>\\0`` framing) with SHA-256."""
    h = hashlib.sha256()
    h.update(f"blob {len(data)}\0".encode())
    h.update(data)
    return h.hexdigest()


def input_hashes(paths) -> dict:
    out = {}
    for p in paths:
        if p is not None:
            out[str(p)] = content_hash(Path(p).read_bytes())
    return out


def metadata_lines(command: str, config: dict, inputs: dict | None = None) -> list[str]:
    return [f"# tool: sbf {__version__}",
            f"# command: {command}",
            "# config: " + json.dumps(config, sort_keys=True, default=str),
            "# inputs: " + json.dumps(inputs or {}, sort_keys=True)]


def write_csv(path, header, rows, meta_lines) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in meta_lines:
            fh.write(line + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    try:
        x = float(obj)
    except (TypeError, ValueError):
        return str(obj)
    if math.isfinite(x):
        return float(fmt(x))
    return fmt(x)


def dump_json(obj, meta: dict | None = None) -> str:
    payload = dict(_jsonable(obj))
    if meta is not None:
        payload = {"metadata": _jsonable(meta), **payload}
    return json.dumps(payload, indent=2, sort_keys=False)
