"""Finite metric spaces, subsets, epsilon-nets and the Hausdorff distance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

TOL_METRIC = 1e-9
TOL_NUM = 1e-9


class MetricError(ValueError):
    """Base class for rejected distance matrices."""


class ZeroDimension(MetricError):
    def __init__(self):
        super().__init__("empty spaces are not metric spaces (need n >= 1)")


class MalformedMatrix(MetricError):
    pass


class NonZeroDiagonal(MetricError):
    def __init__(self, i: int, value: float):
        self.i, self.value = i, value
        super().__init__(f"dist[{i}][{i}] = {value!r}, expected 0")


class ViolatedSymmetry(MetricError):
    def __init__(self, i: int, j: int, gap: float):
        self.i, self.j, self.gap = i, j, gap
        super().__init__(f"not symmetric: |dist[{i}][{j}] - dist[{j}][{i}]| = {gap!r} exceeds tolerance")


class NonPositiveOffDiagonal(MetricError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"dist[{i}][{j}] = {value!r} must be > 0 for distinct points")


class ViolatedTriangle(MetricError):
    def __init__(self, i: int, j: int, k: int, slack: float):
        self.i, self.j, self.k, self.slack = i, j, k, slack
        super().__init__(
            f"triangle inequality fails: dist[{i}][{k}] exceeds dist[{i}][{j}] + dist[{j}][{k}] by {slack!r}"
        )


class DifferentAmbientSpaces(ValueError):
    pass


class NonPositiveScale(ValueError):
    pass


def _check_matrix(d: np.ndarray, tol_metric: float) -> np.ndarray:
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        if d.size == 0:
            raise ZeroDimension()
        raise MalformedMatrix(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    if n == 0:
        raise ZeroDimension()
    if not np.all(np.isfinite(d)):
        i, j = np.argwhere(~np.isfinite(d))[0]
        raise MalformedMatrix(f"dist[{i}][{j}] = {d[i, j]!r} is not a finite real")

    diag = np.diagonal(d)
    if np.any(diag != 0):
        i = int(np.flatnonzero(diag != 0)[0])
        raise NonZeroDiagonal(i, float(d[i, i]))

    asym = np.abs(d - d.T)
    if asym.max() > tol_metric:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise ViolatedSymmetry(int(i), int(j), float(asym[i, j]))
    d = (d + d.T) / 2.0

    off = ~np.eye(n, dtype=bool)
    bad = off & (d <= 0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonPositiveOffDiagonal(int(i), int(j), float(d[i, j]))

    # slack[i, j, k] = d[i, k] - d[i, j] - d[j, k]
    slack = d[:, None, :] - d[:, :, None] - d[None, :, :]
    worst = int(np.argmax(slack))
    if slack.flat[worst] > tol_metric:
        i, j, k = np.unravel_index(worst, slack.shape)
        raise ViolatedTriangle(int(i), int(j), int(k), float(slack.flat[worst]))
    return d


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A labelled finite point set with a validated distance matrix.

    Construction canonicalizes symmetry and checks every metric axiom; an
    instance is therefore always a genuine metric space. The matrix is stored
    read-only.
    """

    dist: np.ndarray
    labels: tuple = ()
    tol_metric: float = field(default=TOL_METRIC, repr=False)

    def __post_init__(self):
        d = _check_matrix(np.array(self.dist, dtype=float), self.tol_metric)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        n = d.shape[0]
        labels = tuple(str(s) for s in self.labels) if self.labels else tuple(f"p{i}" for i in range(n))
        if len(labels) != n:
            raise MalformedMatrix(f"{len(labels)} labels given for {n} points")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    def eccentricity(self) -> np.ndarray:
        return self.dist.max(axis=1)

    def subset(self, members: Iterable[int]) -> "PointSubset":
        return PointSubset(self, frozenset(members))

    def whole(self) -> "PointSubset":
        return PointSubset(self, frozenset(range(self.n)))

    def permuted(self, perm: Sequence[int]) -> "FiniteMetricSpace":
        """Relabel points so that new point ``k`` is old point ``perm[k]``."""
        p = np.asarray(perm, dtype=int)
        return FiniteMetricSpace(self.dist[np.ix_(p, p)], tuple(self.labels[i] for i in p))

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __hash__(self):
        return hash((self.labels, self.dist.tobytes()))

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n}, diameter={self.diameter:g})"


def validate_space(
    matrix,
    tol_metric: float = TOL_METRIC,
    labels: Optional[Sequence[str]] = None,
) -> FiniteMetricSpace:
    """Validate ``matrix`` as a distance matrix and wrap it.

    Raises one of ``ZeroDimension``, ``MalformedMatrix``, ``NonZeroDiagonal``,
    ``ViolatedSymmetry``, ``NonPositiveOffDiagonal`` or ``ViolatedTriangle``;
    each names the offending entries.
    """
    return FiniteMetricSpace(np.asarray(matrix, dtype=float), tuple(labels or ()), tol_metric)


@dataclass(frozen=True)
class PointSubset:
    space: FiniteMetricSpace
    members: frozenset

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        if not members:
            raise ValueError("subsets must be nonempty")
        bad = [i for i in members if not 0 <= i < self.space.n]
        if bad:
            raise IndexError(f"indices {sorted(bad)} out of range for a {self.space.n}-point space")
        object.__setattr__(self, "members", members)

    def indices(self) -> np.ndarray:
        return np.fromiter(sorted(self.members), dtype=int)

    def __len__(self):
        return len(self.members)


def point_set_distance(x: int, A: PointSubset) -> float:
    """``|xA|``: distance from point ``x`` to the nearest member of ``A``."""
    if not 0 <= x < A.space.n:
        raise IndexError(f"point {x} out of range")
    return float(A.space.dist[x, A.indices()].min())


def _distances_to(A: PointSubset) -> np.ndarray:
    return A.space.dist[:, A.indices()].min(axis=1)


def is_eps_net(A: PointSubset, eps: float) -> bool:
    """True iff every point of the ambient space is strictly closer than ``eps`` to ``A``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return bool(np.all(_distances_to(A) < eps))


def hausdorff_distance(A: PointSubset, B: PointSubset) -> float:
    """Hausdorff distance between two subsets of one finite space.

    For finite sets the infimum over radii ``r`` with ``A`` inside the open
    ``r``-neighbourhood of ``B`` and vice versa equals the max-min formula.
    """
    if A.space is not B.space and A.space != B.space:
        raise DifferentAmbientSpaces("subsets live in different spaces")
    d = A.space.dist[np.ix_(A.indices(), B.indices())]
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def scale_space(X: FiniteMetricSpace, lam: float) -> FiniteMetricSpace:
    if not lam > 0:
        raise NonPositiveScale(f"scale factor must be positive, got {lam!r}")
    return FiniteMetricSpace(X.dist * lam, X.labels, X.tol_metric)


def one_point_space(label: str = "p0") -> FiniteMetricSpace:
    return FiniteMetricSpace(np.zeros((1, 1)), (label,))


def is_isometric(X: FiniteMetricSpace, Y: FiniteMetricSpace, tol: float = 0.0) -> bool:
    """Decide isometry by searching for a distance-preserving permutation.

    Plain backtracking over partial bijections; meant for small spaces only.
    """
    n = X.n
    if n != Y.n:
        return False
    dx, dy = X.dist, Y.dist
    if not np.allclose(np.sort(dx, axis=None), np.sort(dy, axis=None), rtol=0, atol=tol):
        return False
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j]:
                continue
            if all(abs(dx[i, k] - dy[j, image[k]]) <= tol for k in range(i)):
                image[i], used[j] = j, True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return extend(0)
