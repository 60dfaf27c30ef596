import itertools

import numpy as np
import pytest

from ghdist.generators import random_space
from ghdist.metric_core import one_point_space, validate_space


def points_on_line(*coords):
    c = np.asarray(coords, dtype=float)
    return validate_space(np.abs(c[:, None] - c[None, :]))


def two_points(d):
    return validate_space([[0.0, d], [d, 0.0]])


def brute_force_gh(X, Y):
    """Half the least distortion over every subset of X x Y that covers both sides.

    Written with plain loops so it shares nothing with the library code.
    """
    cells = list(itertools.product(range(X.n), range(Y.n)))
    best = float("inf")
    for r in range(1, len(cells) + 1):
        for rel in itertools.combinations(cells, r):
            if {i for i, _ in rel} != set(range(X.n)) or {j for _, j in rel} != set(range(Y.n)):
                continue
            dis = max(abs(X.dist[i, k] - Y.dist[j, l]) for i, j in rel for k, l in rel)
            best = min(best, dis)
    return best / 2


@pytest.fixture
def line013():
    return points_on_line(0, 1, 3)


@pytest.fixture
def point():
    return one_point_space()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def random_pairs(seed, count, max_n=4):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield (random_space(int(rng.integers(1, max_n + 1)), rng),
               random_space(int(rng.integers(1, max_n + 1)), rng))
