"""Maps between finite spaces and the distances built from epsilon-isometries.

Two notions of epsilon-isometry are supported. The modern one asks for
``dis f <= eps`` and an image that is an eps-net (strictly: every target point
lies at distance ``< eps`` from the image). Edwards's older notion only asks for
``dis f <= eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ._search import DistortionSearch
from .correspondences import Correspondence
from .metric_core import FiniteMetricSpace

EXHAUSTIVE_CAP = 200_000
HAT_CAP = 2_000_000
_CHUNK = 50_000


class BudgetExhausted(RuntimeError):
    """Raised when a branch-and-bound map search stops early.

    Carries the best map found and the proven bracket on the optimum.
    """

    def __init__(self, best: "PointMap", value: float, lower_bound: float):
        self.best, self.value, self.lower_bound = best, value, lower_bound
        super().__init__(f"node budget exhausted: optimum in [{lower_bound!r}, {value!r}]")


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PointMap:
    source: FiniteMetricSpace
    target: FiniteMetricSpace
    image: tuple

    def __post_init__(self):
        image = tuple(int(j) for j in self.image)
        if len(image) != self.source.n:
            raise ValueError(f"map must send all {self.source.n} source points, got {len(image)}")
        if any(not 0 <= j < self.target.n for j in image):
            raise IndexError("image index out of range")
        object.__setattr__(self, "image", image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __eq__(self, other):
        if not isinstance(other, PointMap):
            return NotImplemented
        return self.image == other.image and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"PointMap({list(self.image)})"

    @classmethod
    def identity(cls, X: FiniteMetricSpace) -> "PointMap":
        return cls(X, X, tuple(range(X.n)))


def map_distortion(f: PointMap) -> float:
    img = np.asarray(f.image)
    return float(np.abs(f.source.dist - f.target.dist[np.ix_(img, img)]).max())


def covering_radius(f: PointMap) -> float:
    """Largest distance from a target point to the image of ``f``.

    The image is an eps-net exactly when this is strictly below eps.
    """
    img = sorted(set(f.image))
    return float(f.target.dist[:, img].min(axis=1).max())


def is_eps_isometry(f: PointMap, eps: float, sense: str = "modern") -> bool:
    if eps <= 0:
        raise ValueError("eps must be positive")
    if sense == "edwards":
        return map_distortion(f) <= eps
    if sense == "modern":
        return map_distortion(f) <= eps and covering_radius(f) < eps
    raise ValueError(f"unknown sense {sense!r}; use 'modern' or 'edwards'")


def _map_chunks(n: int, m: int):
    """All maps ``range(n) -> range(m)`` as image rows, in lexicographic order."""
    total = m ** n
    weights = m ** np.arange(n - 1, -1, -1)
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total))
        yield (codes[:, None] // weights[None, :]) % m


def _distortions(images: np.ndarray, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    sub = dy[images[:, :, None], images[:, None, :]]
    return np.abs(sub - dx[None]).max(axis=(1, 2))


def _radii(images: np.ndarray, dy: np.ndarray) -> np.ndarray:
    # radius[k] = max_y min_i dy[y, images[k, i]]
    to_image = dy[:, images]  # (m, K, n)
    return to_image.min(axis=2).max(axis=0)


def min_distortion_map(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    budget: Optional[int] = None,
) -> Tuple[PointMap, float]:
    """A map ``X -> Y`` of least distortion, with that distortion.

    Small instances are enumerated outright and the lexicographically first
    minimiser is returned. Larger ones go through branch-and-bound, which
    raises ``BudgetExhausted`` if ``budget`` nodes are not enough.
    """
    n, m = X.n, Y.n
    if m ** n <= EXHAUSTIVE_CAP:
        best_val, best_img = math.inf, None
        for images in _map_chunks(n, m):
            dis = _distortions(images, X.dist, Y.dist)
            k = int(np.argmin(dis))
            if dis[k] < best_val:
                best_val, best_img = float(dis[k]), images[k]
        return PointMap(X, Y, tuple(best_img)), best_val

    out = DistortionSearch(X.dist, Y.dist, cover_y=False).run(budget=budget)
    if out.pairs is None:
        # budget ran out before any complete map; fall back to a constant map
        const = PointMap(X, Y, (0,) * n)
        raise BudgetExhausted(const, map_distortion(const), out.open_bound or 0.0)
    image = [0] * n
    for i, j in out.pairs:
        image[i] = j
    f = PointMap(X, Y, tuple(image))
    if out.truncated:
        raise BudgetExhausted(f, out.value, min(out.value, out.open_bound))
    return f, out.value


def edwards_dE(X: FiniteMetricSpace, Y: FiniteMetricSpace, budget: Optional[int] = None) -> float:
    """Edwards's first distance: the least eps admitting maps X -> Y and Y -> X of distortion <= eps.

    Distortion bounds are closed conditions, so the infimum is attained and
    the two directions can be optimised independently.
    """
    return max(min_distortion_map(X, Y, budget)[1], min_distortion_map(Y, X, budget)[1])


@dataclass(frozen=True)
class HatResult:
    value: float
    attained: bool
    forward: PointMap
    backward: PointMap

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "attained": self.attained,
            "forward": list(self.forward.image),
            "backward": list(self.backward.image),
        }


def _best_modern(X: FiniteMetricSpace, Y: FiniteMetricSpace):
    """Least ``max(dis f, radius f)`` over maps X -> Y, plus per-map data for attainment."""
    n, m = X.n, Y.n
    if m ** n > HAT_CAP:
        raise EnumerationTooLarge(f"{m}^{n} maps exceed the enumeration cap of {HAT_CAP}")
    best_val, best_img = math.inf, None
    records = []
    for images in _map_chunks(n, m):
        dis = _distortions(images, X.dist, Y.dist)
        rad = _radii(images, Y.dist)
        score = np.maximum(dis, rad)
        k = int(np.argmin(score))
        if score[k] < best_val:
            best_val, best_img = float(score[k]), images[k]
        records.append((images, dis, rad))
    return best_val, PointMap(X, Y, tuple(best_img)), records


def _witness(records, eps: float):
    """First map with ``dis <= eps`` and ``radius < eps``, or None."""
    for images, dis, rad in records:
        ok = np.flatnonzero((dis <= eps) & (rad < eps))
        if ok.size:
            return images[ok[0]]
    return None


def hat_dGH(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> HatResult:
    """Infimum of eps for which modern eps-isometries exist in both directions.

    The eps-net condition is strict, so the infimum need not be feasible;
    ``attained`` says whether it is. A value of zero (isometric spaces) is
    reported as attained.
    """
    v_fwd, f, rec_f = _best_modern(X, Y)
    v_bwd, g, rec_g = _best_modern(Y, X)
    value = max(v_fwd, v_bwd)
    if value == 0:
        return HatResult(0.0, True, f, g)
    wf, wg = _witness(rec_f, value), _witness(rec_g, value)
    attained = wf is not None and wg is not None
    if attained:
        f, g = PointMap(X, Y, tuple(wf)), PointMap(Y, X, tuple(wg))
    return HatResult(value, attained, f, g)


def correspondence_to_map(
    R: Correspondence,
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    direction: str = "X->Y",
) -> PointMap:
    """Pick for each source point its smallest partner in ``R``.

    The graph is a sub-relation of ``R``, so the map's distortion is at most
    ``dis R``; its covering radius is at most ``dis R`` too.
    """
    if direction == "Y->X":
        R, X, Y = R.transpose(), Y, X
    elif direction != "X->Y":
        raise ValueError("direction must be 'X->Y' or 'Y->X'")
    if (R.n_x, R.n_y) != (X.n, Y.n):
        raise ValueError("correspondence does not match the spaces")
    image = [min(j for i, j in R.pairs if i == k) for k in range(X.n)]
    return PointMap(X, Y, tuple(image))
