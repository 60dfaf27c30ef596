"""Desk-scale tables: finite circle approximations and the scaling path."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .correspondences import distortion, gh_exact, nearest_point_correspondence
from .generators import ngon
from .metric_core import FiniteMetricSpace, one_point_space, scale_space
from .spacefile import save_space

DENSITY_LEVELS = (4, 8, 16, 32)
CONTRACT_LAMBDAS = (0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


def density_demo(
    levels: Sequence[int] = DENSITY_LEVELS,
    budget: Optional[int] = 1_000_000,
    chord: bool = False,
    out_dir: Optional[Path] = None,
) -> Dict:
    """Distances between consecutive circle discretizations ``C_n`` and ``C_2n``.

    Each row gives the exact value when the solver finishes within ``budget``
    and always the certified upper bound from the doubling correspondence
    ``i -> 2i``.
    """
    rows: List[dict] = []
    for n in levels:
        X, Y = ngon(n, chord), ngon(2 * n, chord)
        start = nearest_point_correspondence(X, Y, [2 * i for i in range(n)])
        upper = distortion(start, X, Y) / 2
        res = gh_exact(X, Y, budget=budget, initial=start)
        rows.append({
            "n": n,
            "m": 2 * n,
            "upper_bound": upper,
            "exact": None if res.truncated else res.value,
            "lower_bound": res.lower_bound,
            "mesh_step": 2 * math.pi / (2 * n),
            "nodes": res.nodes_explored,
        })
        if out_dir is not None:
            save_space(X, out_dir / f"C{n}.space")
            save_space(Y, out_dir / f"C{2 * n}.space")
    uppers = [r["upper_bound"] for r in rows]
    exacts = [r["exact"] for r in rows]
    monotone_upper = all(b < a for a, b in zip(uppers, uppers[1:]))
    monotone_exact = None
    if all(e is not None for e in exacts):
        monotone_exact = all(b < a for a, b in zip(exacts, exacts[1:]))
    return {
        "demo": "density",
        "metric": "chord" if chord else "arc",
        "rows": rows,
        "monotone_upper_bound": monotone_upper,
        "monotone_exact": monotone_exact,
    }


def contract_demo(
    X: FiniteMetricSpace,
    lambdas: Sequence[float] = CONTRACT_LAMBDAS,
    out_dir: Optional[Path] = None,
) -> Dict:
    """Distance from ``lambda * X`` to a point (shrinks to 0) and to ``X`` (grows without bound).

    ``lambda = 0`` stands for the one-point space at the end of the path.
    """
    point = one_point_space()
    rows = []
    for lam in lambdas:
        Xl = scale_space(X, lam) if lam > 0 else point
        to_point = gh_exact(Xl, point).value
        to_x = gh_exact(Xl, X).value
        rows.append({
            "lambda": lam,
            "to_point": to_point,
            "expected_to_point": lam * X.diameter / 2,
            "to_X": to_x,
            "expected_to_X": abs(lam - 1) * X.diameter / 2,
        })
        if out_dir is not None and lam > 0:
            save_space(Xl, out_dir / f"scaled_{lam:g}.space")
    if out_dir is not None:
        save_space(X, out_dir / "base.space")
    return {
        "demo": "contract",
        "diameter": X.diameter,
        "rows": rows,
        "to_point_exact": all(r["to_point"] == r["expected_to_point"] for r in rows),
        "to_X_matches": all(math.isclose(r["to_X"], r["expected_to_X"], rel_tol=1e-12, abs_tol=1e-12)
                            for r in rows),
    }
