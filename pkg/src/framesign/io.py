"""Deterministic CSV/JSON output with a config header, written atomically."""

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import BadParameter


def fmt(x):
    """Shortest round-trip text for a number; ints stay ints."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no NaN/inf literals
        return x if math.isfinite(x) else fmt(x)
    return obj


def write_csv(path, columns, rows, config):
    """CSV with ``# key: value`` header lines holding ``config``."""
    lines = [f"# {k}: {json.dumps(_jsonable(v), sort_keys=True)}" for k, v in config.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path, payload, config):
    """JSON object whose first key is ``config``."""
    doc = {"config": _jsonable(config)}
    doc.update(_jsonable(payload))
    _atomic_write(path, json.dumps(doc, indent=2) + "\n")


def read_csv(path):
    """``(config, columns, data)`` with ``data`` a float array of shape (rows, cols)."""
    config = {}
    body = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition(": ")
            config[key] = json.loads(val)
        else:
            body.append(line)
    columns = body[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in body[1:]]).reshape(-1, len(columns))
    return config, columns, data


def parse_range(text):
    """``"a:b:count"`` -> ``count`` equispaced values from ``a`` to ``b`` inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise BadParameter(f"range must look like a:b:count, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise BadParameter(f"bad range {text!r}: {exc}") from None
    if n < 1 or (n > 1 and not a < b):
        raise BadParameter(f"bad range {text!r}: need count >= 1 and a < b")
    return np.linspace(a, b, n) if n > 1 else np.array([a])


def parse_interval(text):
    """``"a,b"`` -> ``(a, b)`` with ``a < b``."""
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise BadParameter(f"interval must look like a,b, got {text!r}") from None
    if not a < b:
        raise BadParameter(f"interval needs a < b, got {text!r}")
    return a, b


def parse_floats(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise BadParameter(f"expected comma-separated numbers, got {text!r}") from None
