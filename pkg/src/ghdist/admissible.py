"""Admissible metrics on the disjoint union of two spaces, and geodesic midpoints."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .correspondences import Correspondence, distortion, gh_exact
from .metric_core import (
    TOL_METRIC,
    FiniteMetricSpace,
    PointSubset,
    hausdorff_distance,
)

TOL_QUOTIENT = 1e-12


class RadiusTooSmall(ValueError):
    pass


class NonPositiveRadius(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AdmissibleMetric:
    """A metric on ``X ⊔ Y`` given by the cross block ``cross[i, j] = rho(x_i, y_j)``.

    The assembled matrix is validated on construction, so the X and Y blocks
    are the original metrics and every mixed triangle holds.
    """

    X: FiniteMetricSpace
    Y: FiniteMetricSpace
    cross: np.ndarray

    def __post_init__(self):
        cross = np.array(self.cross, dtype=float)
        if cross.shape != (self.X.n, self.Y.n):
            raise ValueError(f"cross block has shape {cross.shape}, expected {(self.X.n, self.Y.n)}")
        cross.setflags(write=False)
        object.__setattr__(self, "cross", cross)
        object.__setattr__(self, "_space", FiniteMetricSpace(self.matrix(), self._labels(), self.X.tol_metric))

    def _labels(self):
        return tuple(f"X:{s}" for s in self.X.labels) + tuple(f"Y:{s}" for s in self.Y.labels)

    def matrix(self) -> np.ndarray:
        return np.block([[self.X.dist, self.cross], [self.cross.T, self.Y.dist]])

    @property
    def space(self) -> FiniteMetricSpace:
        return self._space

    def x_part(self) -> PointSubset:
        return self._space.subset(range(self.X.n))

    def y_part(self) -> PointSubset:
        return self._space.subset(range(self.X.n, self.X.n + self.Y.n))

    def hausdorff(self) -> float:
        """Hausdorff distance between the copies of X and Y inside the union."""
        return hausdorff_distance(self.x_part(), self.y_part())


def glue_from_correspondence(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    R: Correspondence,
    r: float,
    tol: float = TOL_METRIC,
) -> AdmissibleMetric:
    """Glue X and Y along ``R`` at height ``r``.

    ``rho(x, y) = min over (x', y') in R of |x x'| + r + |y' y|``, the smallest
    admissible extension in which related points sit at distance ``r``. It is
    a metric whenever ``2 r >= dis R`` and gives a Hausdorff distance at most ``r``.
    """
    if not r > 0:
        raise NonPositiveRadius(f"gluing radius must be positive, got {r!r}")
    half = distortion(R, X, Y) / 2
    if r < half - tol:
        raise RadiusTooSmall(f"radius {r!r} is below half the distortion {half!r}")
    pairs = np.array(R.sorted_pairs(), dtype=int)
    a, b = pairs[:, 0], pairs[:, 1]
    # via[i, j, p] = |x_i x_a(p)| + r + |y_b(p) y_j|
    via = X.dist[:, a][:, None, :] + r + Y.dist[:, b][None, :, :]
    return AdmissibleMetric(X, Y, via.min(axis=2))


def _random_correspondence(rng: np.random.Generator, n_x: int, n_y: int) -> Correspondence:
    density = rng.uniform(0.1, 0.7)
    grid = rng.random((n_x, n_y)) < density
    for i in np.flatnonzero(~grid.any(axis=1)):
        grid[i, rng.integers(n_y)] = True
    for j in np.flatnonzero(~grid.any(axis=0)):
        grid[rng.integers(n_x), j] = True
    return Correspondence(n_x, n_y, frozenset(zip(*map(list, np.nonzero(grid)))))


def sample_admissible(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    trials: int,
    rng_seed: Optional[int] = 0,
) -> Iterator[AdmissibleMetric]:
    """Yield ``trials`` random admissible metrics.

    Roughly two thirds are gluings of random correspondences at a random
    radius in ``(dis R / 2, dis R / 2 + diam]``; the rest are random convex
    combinations of two earlier cross blocks (admissibility is a set of linear
    inequalities in the cross block, so it is convex).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    spread = max(X.diameter, Y.diameter) or 1.0
    made = []
    for _ in range(trials):
        if len(made) >= 2 and rng.random() < 1 / 3:
            p, q = rng.choice(len(made), size=2, replace=False)
            t = rng.random()
            rho = AdmissibleMetric(X, Y, t * made[p].cross + (1 - t) * made[q].cross)
        else:
            R = _random_correspondence(rng, X.n, Y.n)
            lo = distortion(R, X, Y) / 2
            r = lo + spread * (1.0 - rng.random())
            rho = glue_from_correspondence(X, Y, R, r)
        made.append(rho)
        yield rho


def _quotient(pre: np.ndarray, tol: float):
    n = pre.shape[0]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(*np.nonzero(pre <= tol)):
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    reps = sorted({find(a) for a in range(n)})
    return reps


def midpoint_space(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    t: float = 0.5,
    certificate: Optional[Correspondence] = None,
    tol_quotient: float = TOL_QUOTIENT,
) -> FiniteMetricSpace:
    """Point at parameter ``t`` on a geodesic from X (t = 0) to Y (t = 1).

    Points are the pairs of an optimal correspondence ``R*`` with the distance
    ``(1 - t)|x x'| + t |y y'|``; pairs at (numerically) zero distance are
    merged. Pass ``certificate`` to reuse a correspondence already computed;
    the geodesic property needs it to be optimal.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    R = certificate if certificate is not None else gh_exact(X, Y).certificate
    pairs = np.array(R.sorted_pairs(), dtype=int)
    a, b = pairs[:, 0], pairs[:, 1]
    pre = (1 - t) * X.dist[np.ix_(a, a)] + t * Y.dist[np.ix_(b, b)]
    reps = _quotient(pre, tol_quotient)
    labels = [f"({X.labels[a[k]]},{Y.labels[b[k]]})" for k in reps]
    return FiniteMetricSpace(pre[np.ix_(reps, reps)], tuple(labels), X.tol_metric)
