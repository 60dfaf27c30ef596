"""Reading and writing space files.

A space file is a JSON object::

    {"n": 3, "labels": ["a", "b", "c"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}

``labels`` is optional and defaults to ``p0 .. p{n-1}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .metric_core import TOL_METRIC, FiniteMetricSpace, MetricError

PathLike = Union[str, Path]


class SpaceFileError(ValueError):
    def __init__(self, source: str, message: str, line: int = None):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.source, self.line = source, line


def _line_of(text: str, needle: str):
    pos = text.find(needle)
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def _row_line(text: str, i: int):
    """Line of the ``i``-th row of the ``dist`` array (1-based), or None if not found."""
    pos = text.find('"dist"')
    if pos < 0:
        return None
    depth, row = 0, -1
    for k in range(text.find("[", pos), len(text)):
        ch = text[k]
        if ch == "[":
            depth += 1
            if depth == 2:
                row += 1
                if row == i:
                    return text.count("\n", 0, k) + 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
    return None


def parse_space(text: str, source: str = "<string>", tol_metric: float = TOL_METRIC) -> FiniteMetricSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpaceFileError(source, exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise SpaceFileError(source, "top level must be an object", 1)
    for key in ("n", "dist"):
        if key not in doc:
            raise SpaceFileError(source, f"missing field {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpaceFileError(source, f"'n' must be a positive integer, got {n!r}", _line_of(text, '"n"'))
    dist = doc["dist"]
    dline = _line_of(text, '"dist"')
    if not isinstance(dist, list) or len(dist) != n or any(not isinstance(r, list) or len(r) != n for r in dist):
        raise SpaceFileError(source, f"'dist' must be a {n}x{n} array", dline)
    for i, row in enumerate(dist):
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SpaceFileError(source, f"dist[{i}][{j}] = {v!r} is not a number", _row_line(text, i))
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise SpaceFileError(source, f"'labels' must list {n} strings", _line_of(text, '"labels"'))
    try:
        return FiniteMetricSpace(np.array(dist, dtype=float), tuple(labels or ()), tol_metric)
    except MetricError as exc:
        row = getattr(exc, "i", None)
        line = _row_line(text, row) if row is not None else dline
        raise SpaceFileError(source, f"invalid metric: {exc}", line) from None


def load_space(path: PathLike, tol_metric: float = TOL_METRIC) -> FiniteMetricSpace:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpaceFileError(str(path), exc.strerror or str(exc)) from None
    return parse_space(text, str(path), tol_metric)


def space_to_dict(X: FiniteMetricSpace) -> dict:
    return {"n": X.n, "labels": list(X.labels), "dist": X.dist.tolist()}


def dumps_space(X: FiniteMetricSpace) -> str:
    rows = ",\n    ".join(json.dumps(r) for r in X.dist.tolist())
    return (
        "{\n"
        f'  "n": {X.n},\n'
        f'  "labels": {json.dumps(list(X.labels))},\n'
        f'  "dist": [\n    {rows}\n  ]\n'
        "}\n"
    )


def save_space(X: FiniteMetricSpace, path: PathLike) -> None:
    Path(path).write_text(dumps_space(X))
