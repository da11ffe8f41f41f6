"""Reading and writing algebra files.

An algebra file is TOML::

    dim = 3
    basis = ["X1", "X2", "X3"]
    metric = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]   # optional

    [[brackets]]
    i = 1
    j = 2
    coeffs = [0.0, 0.0, 1.0]

Indices are 1-based and only pairs with i < j are stored.
"""
from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

import numpy as np
import tomli
import tomli_w

from .algebra import MetricLieAlgebra
from .errors import NullityLabError


class InputFormatError(NullityLabError, ValueError):
    pass


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def parse_algebra(text: str) -> MetricLieAlgebra:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise InputFormatError(f"not valid TOML: {exc}") from exc
    if "dim" not in doc:
        raise InputFormatError("missing key 'dim'")
    n = doc["dim"]
    if not isinstance(n, int) or n < 1:
        raise InputFormatError("'dim' must be a positive integer")
    labels = doc.get("basis", [f"X{i + 1}" for i in range(n)])
    if len(labels) != n:
        raise InputFormatError(f"'basis' has {len(labels)} names for dimension {n}")

    c = np.zeros((n, n, n))
    for rec in doc.get("brackets", []):
        try:
            i, j, coeffs = rec["i"], rec["j"], rec["coeffs"]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"bracket record {rec!r} needs i, j and coeffs") from exc
        if not (1 <= i < j <= n):
            raise InputFormatError(f"bracket indices must satisfy 1 <= i < j <= {n}, got ({i}, {j})")
        if len(coeffs) != n:
            raise InputFormatError(f"bracket ({i}, {j}) has {len(coeffs)} coefficients, expected {n}")
        c[i - 1, j - 1] = coeffs
        c[j - 1, i - 1] = -np.asarray(coeffs, dtype=float)

    metric = np.asarray(doc.get("metric", np.eye(n)), dtype=float)
    if metric.shape != (n, n):
        raise InputFormatError(f"'metric' has shape {metric.shape}, expected {(n, n)}")
    return MetricLieAlgebra(n, tuple(labels), c, metric)


def read_algebra(path) -> tuple:
    """Return ``(algebra, digest)`` for the file at ``path``."""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputFormatError(f"{path} is not UTF-8 text") from exc
    return parse_algebra(text), digest(data)


def dump_algebra(alg: MetricLieAlgebra) -> str:
    n = alg.dim
    records = []
    for i in range(n):
        for j in range(i + 1, n):
            if np.any(alg.brackets[i, j]):
                records.append({"i": i + 1, "j": j + 1, "coeffs": [float(x) for x in alg.brackets[i, j]]})
    doc = {
        "dim": n,
        "basis": list(alg.basis_labels),
        "metric": [[float(x) for x in row] for row in alg.metric],
        "brackets": records,
    }
    return tomli_w.dumps(doc)


def write_atomic(path, text: str) -> None:
    """Write ``text`` to a temporary file in the same directory, then rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
