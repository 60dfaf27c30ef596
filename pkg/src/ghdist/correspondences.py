"""Correspondences, distortion, and the exact Gromov-Hausdorff distance.

For finite spaces ``d_GH(X, Y) = min dis(R) / 2`` over all correspondences
``R``. Two independent routes compute it: ``gh_exact_oracle`` scores every
subset of ``X x Y`` and ``gh_exact`` runs a branch-and-bound over minimal
correspondences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Mapping, Optional, Tuple

import numpy as np

from ._search import DistortionSearch
from .metric_core import FiniteMetricSpace

ORACLE_CAP = 25


class SizeMismatch(ValueError):
    pass


class OracleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Correspondence:
    """A relation between ``range(n_x)`` and ``range(n_y)`` whose projections are both onto."""

    n_x: int
    n_y: int
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        if not pairs:
            raise ValueError("a correspondence needs at least one pair")
        for i, j in pairs:
            if not (0 <= i < self.n_x and 0 <= j < self.n_y):
                raise IndexError(f"pair {(i, j)} out of range for sizes {(self.n_x, self.n_y)}")
        missing_x = set(range(self.n_x)) - {i for i, _ in pairs}
        missing_y = set(range(self.n_y)) - {j for _, j in pairs}
        if missing_x or missing_y:
            raise ValueError(
                f"not a correspondence: X points {sorted(missing_x)} and "
                f"Y points {sorted(missing_y)} are unmatched"
            )
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_mask(cls, mask: int, n_x: int, n_y: int) -> "Correspondence":
        return cls(n_x, n_y, frozenset(divmod(b, n_y) for b in range(n_x * n_y) if mask >> b & 1))

    @classmethod
    def diagonal(cls, n: int) -> "Correspondence":
        return cls(n, n, frozenset((i, i) for i in range(n)))

    @classmethod
    def full(cls, n_x: int, n_y: int) -> "Correspondence":
        return cls(n_x, n_y, frozenset((i, j) for i in range(n_x) for j in range(n_y)))

    def sorted_pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.pairs)

    def mask(self) -> int:
        return sum(1 << (i * self.n_y + j) for i, j in self.pairs)

    def transpose(self) -> "Correspondence":
        return Correspondence(self.n_y, self.n_x, frozenset((j, i) for i, j in self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())


@dataclass(frozen=True)
class GHResult:
    value: float
    certificate: Correspondence
    lower_bound: float
    upper_bound: float
    nodes_explored: int = 0
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "nodes_explored": self.nodes_explored,
            "truncated": self.truncated,
            "certificate": [list(p) for p in self.certificate.sorted_pairs()],
        }


def distortion(R, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Distortion of a nonempty relation: the largest ``| |xx'| - |yy'| |`` over related pairs.

    ``R`` may be a ``Correspondence`` or any iterable of index pairs.
    """
    if isinstance(R, Correspondence) and (R.n_x, R.n_y) != (X.n, Y.n):
        raise SizeMismatch(f"correspondence sized {(R.n_x, R.n_y)} for spaces {(X.n, Y.n)}")
    pairs = np.array(sorted(R.pairs if isinstance(R, Correspondence) else R), dtype=int).reshape(-1, 2)
    if len(pairs) == 0:
        raise ValueError("distortion of an empty relation is undefined")
    if pairs[:, 0].max() >= X.n or pairs[:, 1].max() >= Y.n or pairs.min() < 0:
        raise SizeMismatch("relation indices out of range")
    ii, jj = pairs[:, 0], pairs[:, 1]
    return float(np.abs(X.dist[np.ix_(ii, ii)] - Y.dist[np.ix_(jj, jj)]).max())


def enumerate_correspondences(n_x: int, n_y: int) -> Iterator[Correspondence]:
    """Yield every correspondence between sets of sizes ``n_x`` and ``n_y``.

    Pair ``(i, j)`` is bit ``i * n_y + j``; relations come out in increasing
    bitmask order.
    """
    if n_x * n_y > ORACLE_CAP:
        raise OracleTooLarge(f"{n_x}x{n_y} grid exceeds the {ORACLE_CAP}-cell enumeration cap")
    row_masks = [((1 << n_y) - 1) << (i * n_y) for i in range(n_x)]
    col_masks = [sum(1 << (i * n_y + j) for i in range(n_x)) for j in range(n_y)]
    for mask in range(1, 1 << (n_x * n_y)):
        if all(mask & r for r in row_masks) and all(mask & c for c in col_masks):
            yield Correspondence.from_mask(mask, n_x, n_y)


def _all_subset_distortions(cost: np.ndarray) -> np.ndarray:
    """Distortion of every subset of cells, indexed by bitmask.

    ``cost[p, q]`` is the distortion between cells ``p`` and ``q``. Built by
    adding the highest bit: dis(S + p) = max(dis(S), max_{q in S} cost[p, q]).
    """
    N = cost.shape[0]
    dis = np.zeros(1 << N)
    for p in range(N):
        lo = 1 << p
        # row_max[S] = max_{q in S} cost[p, q] for S below bit p
        row_max = np.zeros(lo)
        for q in range(p):
            half = 1 << q
            row_max[half:2 * half] = np.maximum(row_max[:half], cost[p, q])
        dis[lo:2 * lo] = np.maximum(dis[:lo], row_max)
    return dis


def _coverage(n_x: int, n_y: int) -> np.ndarray:
    masks = np.arange(1 << (n_x * n_y), dtype=np.int64)
    ok = np.ones(masks.shape, dtype=bool)
    for i in range(n_x):
        ok &= (masks & (((1 << n_y) - 1) << (i * n_y))) != 0
    for j in range(n_y):
        ok &= (masks & sum(1 << (i * n_y + j) for i in range(n_x))) != 0
    return ok


def gh_exact_oracle(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> GHResult:
    """Brute-force ``d_GH``: score every subset of ``X x Y`` and keep the correspondences.

    The certificate is the first minimiser in bitmask order, i.e. the first
    one ``enumerate_correspondences`` would yield.
    """
    n_x, n_y = X.n, Y.n
    if n_x * n_y > ORACLE_CAP:
        raise OracleTooLarge(f"{n_x}x{n_y} grid exceeds the {ORACLE_CAP}-cell enumeration cap")
    cells = [divmod(b, n_y) for b in range(n_x * n_y)]
    ii = np.array([c[0] for c in cells])
    jj = np.array([c[1] for c in cells])
    cost = np.abs(X.dist[np.ix_(ii, ii)] - Y.dist[np.ix_(jj, jj)])
    dis = _all_subset_distortions(cost)
    dis[~_coverage(n_x, n_y)] = np.inf
    best = int(np.argmin(dis))
    value = float(dis[best]) / 2
    return GHResult(
        value=value,
        certificate=Correspondence.from_mask(best, n_x, n_y),
        lower_bound=value,
        upper_bound=value,
        nodes_explored=1 << (n_x * n_y),
    )


def gh_lower_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Half the diameter gap; every correspondence relates both diameter-realising pairs."""
    return abs(X.diameter - Y.diameter) / 2


def gh_exact(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    budget: Optional[int] = None,
    initial: Optional[Correspondence] = None,
    lexicographic: bool = False,
) -> GHResult:
    """Exact Gromov-Hausdorff distance by branch-and-bound over correspondences.

    Parameters
    ----------
    X, Y : FiniteMetricSpace
        The spaces to compare. Practical up to roughly ten points each.
    budget : int, optional
        Node limit. When it runs out the best correspondence found so far is
        returned with ``truncated=True`` and ``lower_bound < upper_bound``.
    initial : Correspondence, optional
        Starting incumbent, e.g. from ``nearest_point_correspondence``. The
        full relation ``X x Y`` is used otherwise.

    lexicographic : bool
        Canonicalize the certificate by scanning open points and partners in
        index order. Exact but can cost far more nodes than the optimisation.

    Returns
    -------
    GHResult
        On a complete run ``value`` is exact. The certificate comes from a
        second, threshold-mode search at the optimal distortion, so it depends
        only on ``X`` and ``Y`` (not on ``initial`` or the optimisation path).
    """
    start = initial if initial is not None else Correspondence.full(X.n, Y.n)
    start_dis = distortion(start, X, Y)
    diam_bound = gh_lower_bound(X, Y)

    search = DistortionSearch(X.dist, Y.dist, cover_y=True)
    out = search.run(incumbent=start_dis, incumbent_pairs=start.sorted_pairs(), budget=budget)
    nodes = out.nodes
    if out.truncated:
        lower = max(diam_bound, min(out.value, out.open_bound) / 2)
        upper = out.value / 2
        cert = Correspondence(X.n, Y.n, frozenset(out.pairs))
        return GHResult(upper, cert, min(lower, upper), upper, nodes, truncated=True)

    dis_star = out.value
    cert_pairs = out.pairs
    remaining = None if budget is None else budget - nodes
    if remaining is None or remaining > 0:
        canon = DistortionSearch(X.dist, Y.dist, cover_y=True, natural_order=lexicographic)
        first = canon.run(threshold=dis_star, budget=remaining)
        nodes += first.nodes
        if first.pairs is not None:
            cert_pairs = first.pairs
    cert = Correspondence(X.n, Y.n, frozenset(cert_pairs))
    value = dis_star / 2
    return GHResult(value, cert, value, value, nodes)


def nearest_point_correspondence(
    X: FiniteMetricSpace, Y: FiniteMetricSpace, anchor: Mapping[int, int]
) -> Correspondence:
    """Graph of ``anchor`` plus, for each missed ``y``, the X point whose anchor image is nearest to it.

    Ties between equally near owners go to the one adding the least
    distortion against the pairs chosen so far, then to the smallest index.
    """
    if isinstance(anchor, Mapping):
        image = [int(anchor[i]) for i in range(X.n)]
    else:
        image = [int(j) for j in anchor]
        if len(image) != X.n:
            raise ValueError("anchor must be total on X")
    pairs = sorted({(i, j) for i, j in enumerate(image)})
    covered = set(image)
    img = np.asarray(image, dtype=int)
    for j in range(Y.n):
        if j in covered:
            continue
        near = Y.dist[img, j]
        owners = np.flatnonzero(near == near.min())
        a = np.array([p[0] for p in pairs])
        b = np.array([p[1] for p in pairs])
        added = [np.abs(X.dist[i, a] - Y.dist[j, b]).max() for i in owners]
        pairs.append((int(owners[int(np.argmin(added))]), j))
    return Correspondence(X.n, Y.n, frozenset(pairs))
