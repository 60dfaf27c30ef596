"""Seeded property suites checking the structural facts about d_GH on small spaces.

Every suite is deterministic given ``seed``; trial ``t`` draws its spaces from
``numpy.random.default_rng([seed, t])`` so a failing witness can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from .admissible import glue_from_correspondence, midpoint_space, sample_admissible
from .correspondences import distortion, gh_exact, gh_exact_oracle, gh_lower_bound
from .embed_linf import align_upper_bound, kuratowski_embed
from .generators import random_space
from .maps import (
    PointMap,
    correspondence_to_map,
    covering_radius,
    edwards_dE,
    hat_dGH,
    is_eps_isometry,
    map_distortion,
)
from .metric_core import TOL_NUM, FiniteMetricSpace, is_isometric, one_point_space, validate_space

TWO_POINTS = validate_space([[0.0, 1.0], [1.0, 0.0]], labels=["a", "b"])
ONE_POINT = one_point_space("o")


@dataclass
class Check:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    checks: List[Check] = field(default_factory=list)
    table: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, **witness) -> None:
        self.checks.append(Check(name, bool(passed), witness))

    def summary(self) -> Dict[str, dict]:
        out: Dict[str, dict] = {}
        for c in self.checks:
            entry = out.setdefault(c.name, {"passed": 0, "failed": 0})
            entry["passed" if c.passed else "failed"] += 1
        return out

    def to_dict(self, failures_only: bool = True) -> dict:
        checks = self.failures() if failures_only else self.checks
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "summary": self.summary(),
            "failures" if failures_only else "checks": [c.to_dict() for c in checks],
            "table": self.table,
        }


def trial_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng([seed, t])


def random_pair(rng: np.random.Generator, max_n: int = 4):
    X = random_space(int(rng.integers(1, max_n + 1)), rng)
    Y = random_space(int(rng.integers(1, max_n + 1)), rng)
    return X, Y


def _sizes(*spaces: FiniteMetricSpace):
    return [S.n for S in spaces]


def oracle_equivalence(seed: int = 1, trials: int = 200, tol: float = 1e-12) -> SuiteReport:
    rep = SuiteReport("oracle", seed, trials)
    for t in range(trials):
        X, Y = random_pair(trial_rng(seed, t))
        fast, slow = gh_exact(X, Y), gh_exact_oracle(X, Y)
        rep.add("exact equals oracle", abs(fast.value - slow.value) <= tol,
                trial=t, sizes=_sizes(X, Y), exact=fast.value, oracle=slow.value)
        rep.add("certificate attains value", abs(distortion(fast.certificate, X, Y) / 2 - fast.value) <= tol,
                trial=t, sizes=_sizes(X, Y))
        rep.add("diameter bound below value", gh_lower_bound(X, Y) <= fast.value + TOL_NUM,
                trial=t, lower=gh_lower_bound(X, Y), value=fast.value)
    return rep


def metric_axioms(seed: int = 1, trials: int = 100, tol: float = TOL_NUM) -> SuiteReport:
    """Symmetry, identity of indiscernibles and the triangle inequality on random triples.

    A third of the time the second space is a shuffled copy of the first so
    that the zero-distance direction is exercised too.
    """
    rep = SuiteReport("metric-axioms", seed, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        X = random_space(int(rng.integers(1, 6)), rng)
        if rng.random() < 1 / 3:
            Y = X.permuted(rng.permutation(X.n))
        else:
            Y = random_space(int(rng.integers(1, 6)), rng)
        Z = random_space(int(rng.integers(1, 6)), rng)
        d = {}
        for name, (A, B) in {"XY": (X, Y), "YZ": (Y, Z), "XZ": (X, Z)}.items():
            d[name] = gh_exact(A, B).value
            back = gh_exact(B, A).value
            rep.add("symmetry", d[name] == back, trial=t, pair=name, forward=d[name], backward=back)
            iso = is_isometric(A, B, tol=1e-12)
            rep.add("zero iff isometric", (d[name] <= 1e-12) == iso,
                    trial=t, pair=name, value=d[name], isometric=iso)
        rep.add("self distance zero", gh_exact(X, X).value == 0.0, trial=t)
        for a, b, c in (("XZ", "XY", "YZ"), ("XY", "XZ", "YZ"), ("YZ", "XY", "XZ")):
            slack = d[b] + d[c] - d[a]
            rep.add("triangle", slack >= -tol, trial=t, sides=[a, b, c], slack=slack)
    return rep


def admissible_realization(seed: int = 1, trials: int = 20, samples: int = 1000, tol: float = TOL_NUM) -> SuiteReport:
    """Admissible-metric formulation: gluing along an optimal correspondence is
    tight, and no sampled admissible metric beats d_GH."""
    rep = SuiteReport("admissible", seed, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        X, Y = random_pair(rng)
        res = gh_exact(X, Y)
        d = res.value
        # isometric spaces cannot be glued at height 0; approach it instead
        r = d if d > 0 else 1e-12
        glued = glue_from_correspondence(X, Y, res.certificate, r)
        rho = glued.hausdorff()
        rep.add("glued metric tight", abs(rho - d) <= tol,
                trial=t, sizes=_sizes(X, Y), d_gh=d, glued_hausdorff=rho)
        lowest = min(s.hausdorff() for s in sample_admissible(X, Y, samples, int(rng.integers(2**32))))
        rep.add("sampled metrics never below d_GH", lowest >= d - tol,
                trial=t, sizes=_sizes(X, Y), d_gh=d, lowest_sample=lowest)
        rep.table.append({"trial": t, "sizes": _sizes(X, Y), "d_gh": d, "lowest_sample": lowest})
    return rep


def _random_maps(rng, X, Y, count):
    for _ in range(count):
        yield PointMap(X, Y, tuple(int(j) for j in rng.integers(0, Y.n, X.n)))


def isometry_sandwich(seed: int = 1, trials: int = 50, maps_per_pair: int = 30, delta: float = 1e-6,
         tol: float = TOL_NUM) -> SuiteReport:
    """epsilon-isometries versus d_GH in both directions, and the d-hat sandwich."""
    rep = SuiteReport("eps-isometry", seed, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        X, Y = random_pair(rng)
        res = gh_exact(X, Y)
        d = res.value
        for direction, (A, B) in (("X->Y", (X, Y)), ("Y->X", (Y, X))):
            f = correspondence_to_map(res.certificate, X, Y, direction)
            eps = 2 * d + delta
            rep.add("certificate map is a (2d+delta)-isometry", is_eps_isometry(f, eps, "modern"),
                    trial=t, direction=direction, d_gh=d, distortion=map_distortion(f),
                    radius=covering_radius(f))
            for g in _random_maps(rng, A, B, maps_per_pair):
                eps_g = max(map_distortion(g), covering_radius(g))
                if eps_g > 0:
                    rep.add("d_GH <= 2 eps for every eps-isometry", d <= 2 * eps_g + tol,
                            trial=t, direction=direction, image=list(g.image), eps=eps_g, d_gh=d)
        hat = hat_dGH(X, Y)
        rep.add("hat sandwich", hat.value / 2 - tol <= d <= 2 * hat.value + tol,
                trial=t, sizes=_sizes(X, Y), hat=hat.value, d_gh=d)
        rep.table.append({"trial": t, "sizes": _sizes(X, Y), "d_gh": d, "hat": hat.value,
                          "hat_attained": hat.attained})
    hat = hat_dGH(TWO_POINTS, ONE_POINT)
    d = gh_exact(TWO_POINTS, ONE_POINT).value
    rep.add("hat differs from d_GH", hat.value == 1.0 and d == 0.5 and not hat.attained,
            hat=hat.value, attained=hat.attained, d_gh=d)
    return rep


def edwards_ineq(seed: int = 1, trials: int = 100, tol: float = TOL_NUM) -> SuiteReport:
    rep = SuiteReport("edwards-ineq", seed, trials)
    for t in range(trials):
        X, Y = random_pair(trial_rng(seed, t))
        d, de = gh_exact(X, Y).value, edwards_dE(X, Y)
        rep.add("d_GH >= d_E / 2", d >= de / 2 - tol, trial=t, sizes=_sizes(X, Y), d_gh=d, d_e=de)
    d, de = gh_exact(TWO_POINTS, ONE_POINT).value, edwards_dE(TWO_POINTS, ONE_POINT)
    rep.add("equality instance", d == 0.5 and de == 1.0 and d == de / 2, d_gh=d, d_e=de)
    return rep


def geodesic(seed: int = 1, trials: int = 30, tol: float = TOL_NUM) -> SuiteReport:
    """Midpoints along an optimal correspondence split d_GH in half; the path is 1-Lipschitz in t."""
    rep = SuiteReport("geodesic", seed, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        X, Y = random_pair(rng)
        res = gh_exact(X, Y)
        d = res.value
        M = midpoint_space(X, Y, 0.5, res.certificate)
        left, right = gh_exact(X, M).value, gh_exact(M, Y).value
        dev = max(abs(left - d / 2), abs(right - d / 2))
        rep.add("midpoint halves d_GH", dev <= tol, trial=t, d_gh=d, left=left, right=right, deviation=dev)
        ends = (midpoint_space(X, Y, 0.0, res.certificate), midpoint_space(X, Y, 1.0, res.certificate))
        rep.add("endpoints recover X and Y", is_isometric(ends[0], X, 1e-12) and is_isometric(ends[1], Y, 1e-12),
                trial=t)
        s, u = sorted(rng.random(2))
        gap = gh_exact(midpoint_space(X, Y, s, res.certificate), midpoint_space(X, Y, u, res.certificate)).value
        rep.add("path is Lipschitz", gap <= (u - s) * d + tol, trial=t, s=s, t=u, gap=gap, bound=(u - s) * d)
        rep.table.append({"trial": t, "d_gh": d, "midpoint_deviation": dev})
    return rep


def embedding(seed: int = 1, trials: int = 30, max_embed_n: int = 64, restarts: int = 4,
              tol: float = TOL_NUM) -> SuiteReport:
    rep = SuiteReport("embedding", seed, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        n = int(rng.integers(1, max_embed_n + 1)) if t else max_embed_n
        S = random_space(n, rng)
        err = float(np.abs(kuratowski_embed(S).pairwise() - S.dist).max())
        rep.add("Kuratowski embedding is isometric", err <= 1e-12, trial=t, n=n, max_error=err)
        X, Y = random_pair(rng)
        d = gh_exact(X, Y).value
        ub = align_upper_bound(X, Y, restarts, int(rng.integers(2**32)))
        rep.add("alignment bound is sound", ub >= d - tol, trial=t, sizes=_sizes(X, Y), d_gh=d, bound=ub)
        rep.table.append({"trial": t, "sizes": _sizes(X, Y), "d_gh": d, "bound": ub, "gap": ub - d})
    ub = align_upper_bound(TWO_POINTS, ONE_POINT, restarts, seed)
    rep.add("two points vs one point is tight", abs(ub - 0.5) <= 1e-6, bound=ub)
    return rep


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "metric-axioms": metric_axioms,
    "admissible": admissible_realization,
    "eps-isometry": isometry_sandwich,
    "edwards-ineq": edwards_ineq,
    "geodesic": geodesic,
    "embedding": embedding,
    "oracle": oracle_equivalence,
}
# short names used by older command lines
ALIASES = {"thm3": "admissible", "thm6": "eps-isometry"}
