import itertools
import math

import numpy as np
import pytest

from contracta.core import build_complex, closed_skeleton, lower_star_extend


def fix_b():
    """Triangle abc: vertices at 0, ab and bc at 1, ca at 2, abc at 3."""
    return build_complex([
        (("a",), 0), (("b",), 0), (("c",), 0),
        (("a", "b"), 1), (("b", "c"), 1), (("a", "c"), 2), (("a", "b", "c"), 3),
    ])


def fix_c():
    """Square u-w-v-x split by the diagonal uv into triangles uvw and uvx."""
    return build_complex([
        (("u",), 0), (("v",), 0), (("w",), 0), (("x",), 0),
        (("u", "w"), 1), (("u", "x"), 1),
        (("v", "w"), 2), (("v", "x"), 2), (("u", "v"), 2),
        (("u", "v", "w"), 3), (("u", "v", "x"), 3),
    ])


def tetrahedron(heights=(0, 1, 2, 3)):
    tops = list(itertools.combinations(range(4), 3))
    return lower_star_extend(dict(enumerate(map(float, heights))), closed_skeleton(tops))


def brute_bottleneck(D1, D2):
    """Minimum over all bijections of the augmented diagrams."""
    a = [(b, d) for b, d, _ in D1.points]
    c = [(b, d) for b, d, _ in D2.points]
    if sum(math.isinf(d) for _, d in a) != sum(math.isinf(d) for _, d in c):
        return math.inf
    left = [("pt", p) for p in a] + [("diag", p) for p in c]
    right = [("pt", p) for p in c] + [("diag", p) for p in a]

    def cost(x, y):
        if x[0] == "diag" and y[0] == "diag":
            return 0.0
        if x[0] == "diag":
            b, d = y[1]
            return (d - b) / 2
        if y[0] == "diag":
            b, d = x[1]
            return (d - b) / 2
        (b1, d1), (b2, d2) = x[1], y[1]
        db = 0.0 if d1 == d2 else abs(d1 - d2)
        return max(abs(b1 - b2), db)

    best = math.inf
    for perm in itertools.permutations(range(len(right))):
        best = min(best, max((cost(left[i], right[j]) for i, j in enumerate(perm)), default=0.0))
    return best


@pytest.fixture
def fixb():
    return fix_b()


@pytest.fixture
def fixc():
    return fix_c()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
