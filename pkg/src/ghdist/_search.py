"""Depth-first branch-and-bound over relations built pair by pair.

At every node some point that is not yet related to anything (on either
side when correspondences are wanted, only in ``X`` for maps) chooses a
partner on the other side. Any relation built this way until all points are
covered is a correspondence, and every minimal correspondence can be built
this way (choose partners from it). Distortion never drops when pairs are
added, so the minimum over this family is the minimum over all
correspondences.

State is the cost matrix ``C[x, y]``: the largest distortion the pair
``(x, y)`` would create against the pairs already chosen. ``C`` only grows, so

    max(current distortion, max_x min_y C, max_y min_x C)

bounds every completion (the column term only when ``Y`` must be covered).
It is evaluated one step ahead for the open points.
"""

from __future__ import annotations

import math
from typing import List, Optional, Tuple

import numpy as np

Pair = Tuple[int, int]

# above this many look-ahead entries per node, only the chosen point is expanded
LOOKAHEAD_LIMIT = 400_000


class SearchOutcome:
    __slots__ = ("value", "pairs", "nodes", "truncated", "open_bound")

    def __init__(self, value, pairs, nodes, truncated, open_bound):
        self.value = value
        self.pairs = pairs
        self.nodes = nodes
        self.truncated = truncated
        self.open_bound = open_bound


class DistortionSearch:
    """Minimum-distortion search between distance matrices ``dx`` and ``dy``.

    ``cover_y`` selects correspondences (True) or plain maps (False).

    By default the next point to decide is the open one whose best candidate
    has the worst bound (fail first; ties go to X before Y, then higher
    eccentricity), and candidates are tried by increasing bound.
    ``natural_order`` instead decides open X points by index, then open Y
    points, trying partners by increasing index; the first solution met is
    then the lexicographically smallest encoding, which ``threshold`` mode
    uses to canonicalize certificates.
    """

    def __init__(self, dx: np.ndarray, dy: np.ndarray, *, cover_y: bool, natural_order: bool = False):
        self.dx = np.asarray(dx, dtype=float)
        self.dy = np.asarray(dy, dtype=float)
        self.n, self.m = self.dx.shape[0], self.dy.shape[0]
        self.cover_y = cover_y
        self.natural_order = natural_order
        # pair_cost[i, j, x, y] = | dx[i, x] - dy[j, y] |
        self.pair_cost = np.abs(self.dx[:, None, :, None] - self.dy[None, :, None, :])
        # y-major copy: pair_cost_y[j, i] = pair_cost[i, j]
        self.pair_cost_y = np.ascontiguousarray(self.pair_cost.transpose(1, 0, 2, 3))
        # tie-break rank over the n + m points: X first, then by eccentricity
        ecc = np.concatenate([self.dx.max(axis=1), self.dy.max(axis=1)])
        side = np.concatenate([np.zeros(self.n), np.ones(self.m)])
        self.rank = np.argsort(np.lexsort((np.arange(self.n + self.m), -ecc, side)))

    def _bounds(self, cost: np.ndarray, cur) -> np.ndarray:
        # cost has shape (..., n, m): one cost matrix per candidate.
        lb = np.maximum(cur, cost.min(axis=-1).max(axis=-1))
        if self.cover_y:
            lb = np.maximum(lb, cost.min(axis=-2).max(axis=-1))
        return lb

    def run(
        self,
        *,
        incumbent: float = math.inf,
        incumbent_pairs: Optional[List[Pair]] = None,
        threshold: Optional[float] = None,
        budget: Optional[int] = None,
    ) -> SearchOutcome:
        """Search for the minimum (or, with ``threshold``, the first relation
        whose distortion is at most ``threshold``).

        In minimisation mode a branch survives only if its bound is strictly
        below the incumbent, so ``incumbent`` may be any achieved value.
        """
        self.best = incumbent
        self.best_pairs = list(incumbent_pairs) if incumbent_pairs is not None else None
        self.threshold = threshold
        self.budget = budget
        self.nodes = 0
        self.truncated = False
        self.stop = False
        self.open_bounds: List[float] = []
        self.cov_x = np.zeros(self.n, dtype=bool)
        self.cov_y = np.zeros(self.m, dtype=bool)
        self._node(np.zeros((self.n, self.m)), 0.0, [])
        open_bound = min(self.open_bounds) if self.open_bounds else None
        return SearchOutcome(self.best, self.best_pairs, self.nodes, self.truncated, open_bound)

    def _prunes(self, lb: float) -> bool:
        if self.threshold is not None:
            return lb > self.threshold
        return lb >= self.best

    def _accept(self, value: float, pairs: List[Pair]) -> None:
        if self.threshold is not None:
            self.best, self.best_pairs, self.stop = value, list(pairs), True
        elif value < self.best:
            self.best, self.best_pairs = value, list(pairs)

    def _expand(self, cost, cur, side: int, pts: np.ndarray):
        """Cost matrices, distortions and bounds for every partner of each point in ``pts``."""
        if side == 0:
            costs = np.maximum(cost[None, None], self.pair_cost[pts])
            curs = np.maximum(cur, cost[pts])
        else:
            costs = np.maximum(cost[None, None], self.pair_cost_y[pts])
            curs = np.maximum(cur, cost[:, pts].T)
        return costs, curs, self._bounds(costs, curs)

    def _choose(self, cost, cur, open_x, open_y):
        """Pick the point to branch on; returns (side, point, costs, curs, lbs) or None if pruned."""
        size = (open_x.size * self.m + open_y.size * self.n) * self.n * self.m
        if self.natural_order:
            if size <= LOOKAHEAD_LIMIT:
                # decision order is fixed, but any open point with no viable partner prunes
                worst = [self._expand(cost, cur, 0, open_x)[2].min(axis=1)] if open_x.size else []
                if open_y.size:
                    worst.append(self._expand(cost, cur, 1, open_y)[2].min(axis=1))
                if self._prunes(float(np.concatenate(worst).max())):
                    return None
            side, p = (0, int(open_x[0])) if open_x.size else (1, int(open_y[0]))
            costs, curs, lbs = self._expand(cost, cur, side, np.array([p]))
            if self._prunes(float(lbs.min())):
                return None
            return side, p, costs[0], curs[0], lbs[0]

        if size <= LOOKAHEAD_LIMIT:
            blocks = []
            if open_x.size:
                blocks.append((0, open_x) + self._expand(cost, cur, 0, open_x))
            if open_y.size:
                blocks.append((1, open_y) + self._expand(cost, cur, 1, open_y))
            worst = np.concatenate([b[4].min(axis=1) for b in blocks])
            if self._prunes(float(worst.max())):
                return None
            ids = np.concatenate([open_x, open_y + self.n])
            k = int(np.lexsort((self.rank[ids], -worst))[0])
            for side, pts, costs, curs, lbs in blocks:
                if k < pts.size:
                    return side, int(pts[k]), costs[k], curs[k], lbs[k]
                k -= pts.size

        # large instance: rank points by the cheap one-pair bound, expand only the winner
        worst = np.concatenate([
            np.maximum(cur, cost[open_x].min(axis=1)),
            np.maximum(cur, cost[:, open_y].min(axis=0)) if open_y.size else np.empty(0),
        ])
        ids = np.concatenate([open_x, open_y + self.n])
        k = int(np.lexsort((self.rank[ids], -worst))[0])
        side, p = (0, int(ids[k])) if ids[k] < self.n else (1, int(ids[k]) - self.n)
        costs, curs, lbs = self._expand(cost, cur, side, np.array([p]))
        if self._prunes(float(lbs.min())):
            return None
        return side, p, costs[0], curs[0], lbs[0]

    def _node(self, cost, cur: float, pairs: List[Pair]) -> None:
        self.nodes += 1
        open_x = np.flatnonzero(~self.cov_x)
        open_y = np.flatnonzero(~self.cov_y) if self.cover_y else np.empty(0, dtype=int)
        if open_x.size == 0 and open_y.size == 0:
            self._accept(cur, pairs)
            return
        choice = self._choose(cost, cur, open_x, open_y)
        if choice is None:
            return
        side, p, costs, curs, lbs = choice

        if self.natural_order:
            order = [k for k in range(len(lbs)) if not self._prunes(lbs[k])]
        else:
            order = [int(k) for k in np.argsort(lbs, kind="stable") if not self._prunes(lbs[k])]

        for pos, q in enumerate(order):
            if self.stop:
                return
            if self._prunes(lbs[q]):
                continue
            if self.budget is not None and self.nodes >= self.budget:
                self.truncated = True
                self.open_bounds.append(min(float(lbs[r]) for r in order[pos:]))
                return
            x, y = (p, q) if side == 0 else (q, p)
            old = self.cov_x[x], self.cov_y[y]
            self.cov_x[x] = self.cov_y[y] = True
            pairs.append((x, y))
            self._node(costs[q], float(curs[q]), pairs)
            pairs.pop()
            self.cov_x[x], self.cov_y[y] = old
            if self.truncated:
                rest = [float(lbs[r]) for r in order[pos + 1:] if not self._prunes(lbs[r])]
                if rest:
                    self.open_bounds.append(min(rest))
                return
