"""Test and demo spaces."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .metric_core import FiniteMetricSpace

KINDS = ("random", "ngon", "line", "simplex")


def shortest_path_closure(d: np.ndarray) -> np.ndarray:
    d = np.array(d, dtype=float)
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def random_space(n: int, rng: np.random.Generator) -> FiniteMetricSpace:
    """Uniform (0, 1] weights on a complete graph, closed under shortest paths."""
    w = np.triu(1.0 - rng.random((n, n)), 1)
    return FiniteMetricSpace(shortest_path_closure(w + w.T))


def ngon(n: int, chord: bool = False) -> FiniteMetricSpace:
    """``n`` equally spaced points on the circle of circumference 2*pi.

    Arc-length metric by default; ``chord=True`` uses straight-line distances
    of the unit circle instead.
    """
    k = np.arange(n)
    steps = np.abs(k[:, None] - k[None, :])
    steps = np.minimum(steps, n - steps)
    angle = steps * (2 * math.pi / n)
    d = 2 * np.sin(angle / 2) if chord else angle
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d, tuple(f"c{i}" for i in range(n)))


def line(n: int) -> FiniteMetricSpace:
    k = np.arange(n, dtype=float)
    return FiniteMetricSpace(np.abs(k[:, None] - k[None, :]))


def simplex(n: int) -> FiniteMetricSpace:
    return FiniteMetricSpace(1.0 - np.eye(n))


def generate_space(kind: str, n: int, seed: Optional[int] = None, chord: bool = False) -> FiniteMetricSpace:
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "random":
        return random_space(n, np.random.default_rng(seed))
    if kind == "ngon":
        return ngon(n, chord)
    if kind == "line":
        return line(n)
    if kind == "simplex":
        return simplex(n)
    raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
