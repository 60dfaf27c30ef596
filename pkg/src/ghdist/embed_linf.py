"""Isometric embeddings into the sup-norm sequence space.

A finite space sits isometrically in ``l_inf`` through its distance rows
(Kuratowski/Frechet). Hausdorff distances between two such images, over any
choice of isometric embeddings, bound ``d_GH`` from above; ``align_upper_bound``
searches over translations of one image.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .metric_core import FiniteMetricSpace

IMPROVE_TOL = 1e-12
MAX_SWEEPS = 200


@dataclass(frozen=True, eq=False)
class SupNormPointSet:
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("need a nonempty 2-D array of points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def padded(self, dim: int) -> "SupNormPointSet":
        if dim < self.dim:
            raise ValueError("cannot pad to a smaller dimension")
        return SupNormPointSet(np.pad(self.points, ((0, 0), (0, dim - self.dim))))

    def translated(self, v) -> "SupNormPointSet":
        return SupNormPointSet(self.points + np.asarray(v, dtype=float))

    def pairwise(self) -> np.ndarray:
        return np.abs(self.points[:, None, :] - self.points[None, :, :]).max(axis=2)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}


def kuratowski_embed(X: FiniteMetricSpace) -> SupNormPointSet:
    """Send point ``i`` to its row of distances.

    ``max_k | |x_i x_k| - |x_j x_k| |`` is at most ``|x_i x_j|`` by the triangle
    inequality and reaches it at ``k = j``.
    """
    return SupNormPointSet(X.dist.copy())


def _common(A: SupNormPointSet, B: SupNormPointSet):
    dim = max(A.dim, B.dim)
    return A.padded(dim).points, B.padded(dim).points


def supnorm_hausdorff(A: SupNormPointSet, B: SupNormPointSet) -> float:
    """Hausdorff distance under the sup norm; the shorter vectors are zero-padded."""
    a, b = _common(A, B)
    d = np.abs(a[:, None, :] - b[None, :, :]).max(axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _hausdorff_from_diffs(diff: np.ndarray) -> float:
    d = np.abs(diff).max(axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _line_search(diff: np.ndarray, k: int, current: float):
    """Exact minimisation of the Hausdorff objective over the shift of coordinate ``k``.

    ``diff[p, q] = a_p - b_q - v``. For each pair the cost as a function of
    the shift ``s`` is ``max(c, |delta - s|)``; the objective is a max-min of
    these, so its minimum sits at one of the finitely many breakpoints: the
    vertices ``delta``, the kinks ``delta +- c``, and midpoints of two deltas.
    Returns ``(best_value, best_shift)``; shift 0 keeps the current point.
    """
    delta = diff[:, :, k]
    others = np.delete(diff, k, axis=2)
    c = np.abs(others).max(axis=2) if others.shape[2] else np.zeros(delta.shape)
    dflat = np.unique(delta)
    mids = ((dflat[:, None] + dflat[None, :]) / 2).ravel()
    cand = np.unique(np.concatenate([[0.0], dflat, (delta + c).ravel(), (delta - c).ravel(), mids]))
    cost = np.maximum(c[None], np.abs(delta[None] - cand[:, None, None]))
    vals = np.maximum(cost.min(axis=2).max(axis=1), cost.min(axis=1).max(axis=1))
    best = int(np.argmin(vals))
    if vals[best] < current - IMPROVE_TOL:
        return float(vals[best]), float(cand[best])
    return current, 0.0


def _recentre(diff: np.ndarray, current: float):
    """Re-solve the translation for the nearest-neighbour matching at the current point.

    For a fixed set of matched pairs the best translation is, coordinate by
    coordinate, the midpoint of the spread of ``a_p - b_q``; it can only lower
    the objective, and it escapes plateaus where single-coordinate moves stall.
    """
    d = np.abs(diff).max(axis=2)
    rows = np.arange(d.shape[0])
    cols = np.arange(d.shape[1])
    matched = np.concatenate([
        diff[rows, d.argmin(axis=1)],
        diff[d.argmin(axis=0), cols],
    ])
    shift = (matched.max(axis=0) + matched.min(axis=0)) / 2
    value = _hausdorff_from_diffs(diff - shift)
    if value < current - IMPROVE_TOL:
        return value, shift
    return current, None


def _descend(a: np.ndarray, b: np.ndarray, v: np.ndarray) -> float:
    diff = a[:, None, :] - b[None, :, :] - v
    value = _hausdorff_from_diffs(diff)
    for _ in range(MAX_SWEEPS):
        before = value
        for k in range(diff.shape[2]):
            value, s = _line_search(diff, k, value)
            if s:
                diff[:, :, k] -= s
        value, shift = _recentre(diff, value)
        if shift is not None:
            diff -= shift
        if before - value <= IMPROVE_TOL:
            break
    return value


def align_upper_bound(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    restarts: int = 8,
    rng_seed: Optional[int] = 0,
    threads: int = 1,
) -> float:
    """Upper bound on ``d_GH`` from translated Kuratowski embeddings.

    Both spaces are embedded by their distance rows, zero-padded to
    ``X.n + Y.n`` coordinates, and the translation of the Y image is improved
    by exact coordinate descent with nearest-neighbour re-centring. Restart 0
    starts from the zero translation, the others from random ones. Every value
    visited is a Hausdorff distance between isometric copies, so the result
    is never below ``d_GH``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    dim = X.n + Y.n
    a = kuratowski_embed(X).padded(dim).points
    b = kuratowski_embed(Y).padded(dim).points
    spread = max(X.diameter, Y.diameter)
    seeds = np.random.SeedSequence(rng_seed).spawn(restarts)
    starts = [np.zeros(dim)]
    for s in seeds[1:]:
        starts.append(np.random.default_rng(s).uniform(-spread, spread, dim))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda v: _descend(a, b, v), starts))
    else:
        values = [_descend(a, b, v) for v in starts]
    return min(values)
