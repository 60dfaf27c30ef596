import numpy as np
from hypothesis import given, settings, strategies as st

from ghdist.admissible import glue_from_correspondence
from ghdist.correspondences import distortion, gh_exact, gh_exact_oracle
from ghdist.embed_linf import SupNormPointSet, kuratowski_embed, supnorm_hausdorff
from ghdist.generators import random_space
from ghdist.metric_core import (
    PointSubset,
    hausdorff_distance,
    is_eps_net,
    one_point_space,
    scale_space,
    validate_space,
)

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 4)


@st.composite
def spaces(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return random_space(n, np.random.default_rng(draw(seeds)))


@st.composite
def space_with_subsets(draw, count=3):
    X = draw(spaces(max_n=6))
    subs = [PointSubset(X, frozenset(draw(st.sets(st.integers(0, X.n - 1), min_size=1))))
            for _ in range(count)]
    return (X, *subs)


@settings(max_examples=60, deadline=None)
@given(space_with_subsets())
def test_hausdorff_is_a_metric_on_subsets(args):
    X, A, B, C = args
    assert hausdorff_distance(A, A) == 0
    assert hausdorff_distance(A, B) == hausdorff_distance(B, A) >= 0
    assert hausdorff_distance(A, C) <= hausdorff_distance(A, B) + hausdorff_distance(B, C) + 1e-12
    if A.members != B.members:
        assert hausdorff_distance(A, B) > 0


@settings(max_examples=60, deadline=None)
@given(space_with_subsets(count=2), st.floats(0.01, 2.0), st.floats(0.0, 1.0))
def test_eps_net_monotone(args, eps, extra):
    X, A, B = args
    if is_eps_net(A, eps):
        assert is_eps_net(A, eps + extra + 1e-9)
        grown = PointSubset(X, A.members | B.members)
        assert is_eps_net(grown, eps)


@settings(max_examples=40, deadline=None)
@given(spaces(), spaces(), st.floats(0.1, 10.0))
def test_scaling_scales_distance(X, Y, lam):
    d = gh_exact(X, Y).value
    scaled = gh_exact(scale_space(X, lam), scale_space(Y, lam)).value
    assert abs(scaled - lam * d) <= 1e-9 * max(1.0, lam)


@settings(max_examples=40, deadline=None)
# denormal factors underflow the distances to zero, which is rightly rejected
@given(spaces(max_n=5), st.one_of(st.just(0.0), st.floats(1e-6, 8.0)))
def test_distance_to_point_is_half_diameter(X, lam):
    S = scale_space(X, lam) if lam > 0 else one_point_space()
    assert gh_exact(S, one_point_space()).value == (lam * X.diameter / 2 if lam > 0 else 0.0)


@settings(max_examples=40, deadline=None)
@given(spaces(), spaces())
def test_distance_is_symmetric_and_matches_oracle(X, Y):
    a, b = gh_exact(X, Y), gh_exact(Y, X)
    assert a.value == b.value
    assert abs(a.value - gh_exact_oracle(X, Y).value) <= 1e-12
    assert distortion(a.certificate, X, Y) / 2 == a.value


@settings(max_examples=40, deadline=None)
@given(spaces(), spaces(), st.data())
def test_sub_relation_never_more_distorted(X, Y, data):
    cells = [(i, j) for i in range(X.n) for j in range(Y.n)]
    big = data.draw(st.sets(st.sampled_from(cells), min_size=1))
    small = data.draw(st.sets(st.sampled_from(sorted(big)), min_size=1))
    assert distortion(small, X, Y) <= distortion(big, X, Y)


@settings(max_examples=40, deadline=None)
@given(spaces(), st.floats(0.1, 20.0))
def test_scaled_space_validates(X, lam):
    validate_space(scale_space(X, lam).dist)


@settings(max_examples=40, deadline=None)
@given(spaces(), spaces(), st.floats(0.0, 2.0))
def test_glued_metric_validates(X, Y, extra):
    res = gh_exact(X, Y)
    r = max(res.value, 1e-9) + extra
    rho = glue_from_correspondence(X, Y, res.certificate, r)
    validate_space(rho.matrix())
    assert rho.hausdorff() <= r + 1e-12


@settings(max_examples=40, deadline=None)
@given(spaces(max_n=12))
def test_embedding_preserves_distances(X):
    assert np.abs(kuratowski_embed(X).pairwise() - X.dist).max() <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4), seeds)
def test_supnorm_hausdorff_translation_invariant(na, nb, dim, seed):
    rng = np.random.default_rng(seed)
    # dyadic coordinates keep the translated arithmetic exact
    A = SupNormPointSet(rng.integers(-64, 64, (na, dim)) / 8)
    B = SupNormPointSet(rng.integers(-64, 64, (nb, dim)) / 8)
    w = rng.integers(-64, 64, dim) / 8
    assert supnorm_hausdorff(A.translated(w), B.translated(w)) == supnorm_hausdorff(A, B)
