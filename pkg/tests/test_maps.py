import itertools

import numpy as np
import pytest

import ghdist.maps as maps
from ghdist.correspondences import Correspondence, distortion, gh_exact, gh_exact_oracle
from ghdist.generators import random_space, simplex
from ghdist.maps import (
    BudgetExhausted,
    EnumerationTooLarge,
    PointMap,
    correspondence_to_map,
    covering_radius,
    edwards_dE,
    hat_dGH,
    is_eps_isometry,
    map_distortion,
    min_distortion_map,
)

from conftest import points_on_line, random_pairs, two_points


def all_maps(X, Y):
    for img in itertools.product(range(Y.n), repeat=X.n):
        yield PointMap(X, Y, img)


def test_map_distortion_examples(rng):
    X = random_space(4, rng)
    assert map_distortion(PointMap.identity(X)) == 0
    assert map_distortion(PointMap(two_points(2.5), two_points(1), (1, 1))) == 2.5
    assert map_distortion(PointMap(two_points(1), two_points(3), (0, 1))) == 2


def test_covering_radius_examples(line013):
    assert covering_radius(PointMap(two_points(1), two_points(3), (1, 0))) == 0
    assert covering_radius(PointMap(two_points(1), two_points(3), (0, 0))) == 3
    assert covering_radius(PointMap(two_points(1), line013, (0, 1))) == 2


def test_eps_isometry_examples(point):
    X = random_space(3, np.random.default_rng(0))
    ident = PointMap.identity(X)
    for eps in (1e-6, 1.0):
        assert is_eps_isometry(ident, eps, "modern") and is_eps_isometry(ident, eps, "edwards")
    const = PointMap(simplex(3), point, (0, 0, 0))
    assert is_eps_isometry(const, 1, "edwards")
    assert is_eps_isometry(const, 1, "modern")
    into_two = PointMap(two_points(1), two_points(3), (0, 0))
    assert not is_eps_isometry(into_two, 3, "modern")
    assert is_eps_isometry(into_two, 3, "edwards") == (map_distortion(into_two) <= 3)
    with pytest.raises(ValueError):
        is_eps_isometry(ident, 1, "other")


def test_min_distortion_map_examples(point):
    X = points_on_line(0, 1, 3)
    f, v = min_distortion_map(X, X)
    assert v == 0 and f.image == (0, 1, 2)
    assert min_distortion_map(two_points(1), point)[1] == 1
    f, v = min_distortion_map(two_points(1), two_points(3))
    values = {m.image: map_distortion(m) for m in all_maps(two_points(1), two_points(3))}
    # collapsing both points costs 1, stretching 1 to 3 costs 2
    assert v == min(values.values()) == 1
    assert values[(0, 1)] == 2 and f.image in {(0, 0), (1, 1)}


def test_branch_and_bound_matches_enumeration(monkeypatch):
    pairs = list(random_pairs(31, 40, max_n=5))
    expected = [min(map_distortion(f) for f in all_maps(X, Y)) for X, Y in pairs]
    monkeypatch.setattr(maps, "EXHAUSTIVE_CAP", 0)
    for (X, Y), want in zip(pairs, expected):
        f, v = min_distortion_map(X, Y)
        assert v == want == map_distortion(f)


def test_map_budget(monkeypatch):
    monkeypatch.setattr(maps, "EXHAUSTIVE_CAP", 0)
    rng = np.random.default_rng(8)
    X, Y = random_space(9, rng), random_space(8, rng)
    with pytest.raises(BudgetExhausted) as err:
        min_distortion_map(X, Y, budget=3)
    exc = err.value
    assert exc.lower_bound <= min_distortion_map(X, Y)[1] <= exc.value


def test_edwards_examples(point, rng):
    X = random_space(4, rng)
    assert edwards_dE(X, X) == 0
    assert edwards_dE(two_points(1), point) == 1
    assert gh_exact_oracle(two_points(1), point).value == 0.5


def test_edwards_inequality():
    for X, Y in random_pairs(32, 60):
        assert gh_exact(X, Y).value >= edwards_dE(X, Y) / 2 - 1e-9


def hat_by_definition(X, Y):
    """inf eps with modern eps-isometries both ways, scanned over candidate eps values."""
    cands = sorted({map_distortion(f) for f in all_maps(X, Y)} | {covering_radius(f) for f in all_maps(X, Y)}
                   | {map_distortion(g) for g in all_maps(Y, X)} | {covering_radius(g) for g in all_maps(Y, X)})
    def feasible(eps):
        return (eps > 0 and any(is_eps_isometry(f, eps) for f in all_maps(X, Y))
                and any(is_eps_isometry(g, eps) for g in all_maps(Y, X)))
    for c in cands:
        if feasible(c):
            return c, True
        # just above c
        if feasible(c + 1e-9):
            return c, False
    raise AssertionError("no feasible eps")


def test_hat_examples(point, rng):
    X = random_space(3, rng)
    assert hat_dGH(X, X).value == 0 and hat_dGH(X, X).attained
    res = hat_dGH(two_points(1), point)
    assert res.value == 1 and not res.attained


def test_hat_matches_definition():
    for X, Y in random_pairs(33, 30, max_n=3):
        if X.n == Y.n and gh_exact(X, Y).value == 0:
            continue
        value, attained = hat_by_definition(X, Y)
        res = hat_dGH(X, Y)
        assert res.value == pytest.approx(value, abs=1e-12)
        assert res.attained == attained


def test_hat_sandwich():
    for X, Y in random_pairs(34, 60):
        d, h = gh_exact(X, Y).value, hat_dGH(X, Y).value
        assert h / 2 - 1e-9 <= d <= 2 * h + 1e-9


def test_hat_cap(monkeypatch):
    monkeypatch.setattr(maps, "HAT_CAP", 10)
    with pytest.raises(EnumerationTooLarge):
        hat_dGH(simplex(3), simplex(3))


def test_correspondence_to_map(rng):
    X = random_space(4, rng)
    f = correspondence_to_map(Correspondence.diagonal(4), X, X)
    assert f.image == (0, 1, 2, 3)
    for A, B in random_pairs(35, 40):
        res = gh_exact(A, B)
        for direction in ("X->Y", "Y->X"):
            g = correspondence_to_map(res.certificate, A, B, direction)
            assert max(map_distortion(g), covering_radius(g)) <= 2 * res.value + 1e-9
            assert map_distortion(g) <= distortion(res.certificate, A, B)


def test_sub_relation_monotonicity(rng):
    X, Y = random_space(3, rng), random_space(3, rng)
    cells = list(itertools.product(range(3), range(3)))
    for r in range(1, 5):
        for small in itertools.combinations(cells, r):
            big = set(small) | {cells[int(k)] for k in rng.integers(0, 9, 3)}
            assert distortion(small, X, Y) <= distortion(big, X, Y)
