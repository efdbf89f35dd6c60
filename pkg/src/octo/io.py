"""Atomic CSV/JSON writers shared by the grid types and the command line."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__


def format_number(x) -> str:
    """Shortest round-trip representation (at most 17 significant digits)."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    return obj


def with_version(metadata: dict) -> dict:
    meta = {"tool": "octo", "version": __version__}
    meta.update(metadata)
    return meta


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path, payload: dict) -> Path:
    return atomic_write_text(path, json.dumps(_jsonable(payload), indent=2) + "\n")


def write_csv(path, columns: list[str], rows, metadata: dict | None = None) -> Path:
    """CSV with an optional ``# {json}`` metadata header line."""
    lines = []
    if metadata is not None:
        lines.append("# " + json.dumps(_jsonable(metadata), sort_keys=True))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    return atomic_write_text(path, "\n".join(lines) + "\n")


def read_csv(path):
    """Inverse of :func:`write_csv`: returns (metadata or None, columns, float array)."""
    metadata = None
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("# "):
        metadata = json.loads(lines[0][2:])
        lines = lines[1:]
    columns = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:] if line], dtype=float)
    return metadata, columns, data.reshape(-1, len(columns))
