"""The numba kernels and their fallbacks must agree exactly."""
import subprocess
import sys

import numpy as np
import pytest

from contracta import _kernels as kn
from contracta.generators import delaunay_complex, random_filtration

needs_numba = pytest.mark.skipif(not kn.HAVE_NUMBA, reason="numba unavailable")


def _complexes(rng, n=8):
    for _ in range(n):
        yield random_filtration(delaunay_complex(int(rng.integers(6, 30)), 3, rng, 0.8), rng)


def test_twist_equals_standard(rng):
    for K in _complexes(rng):
        ptr, idx = K.boundary_csr
        assert np.array_equal(kn.reduce_low(ptr, idx), kn.reduce_low(ptr, idx, K.dims, twist=True))
    with pytest.raises(ValueError):
        kn.reduce_low(ptr, idx, twist=True)


@needs_numba
def test_reduce_backends_agree(rng):
    for K in _complexes(rng):
        ptr, idx = K.boundary_csr
        n = len(K)
        for clear in (False, True):
            order = np.arange(n, dtype=np.int64)
            if clear:
                order = np.lexsort((order, -K.dims)).astype(np.int64)
            a = kn._reduce_numba(ptr, idx, order, clear)
            b = kn._reduce_python(ptr, idx, order, clear)
            assert np.array_equal(a, b)


def test_kruskal_labels():
    killed = kn.kruskal_kill(3, np.array([0, 1, 0]), np.array([1, 2, 2]))
    assert killed.tolist() == [1, 2, -1]
    killed = kn.kruskal_kill(3, np.array([0, 1]), np.array([1, 2]), keep_max=True)
    assert killed.tolist() == [0, 1]


@needs_numba
def test_kruskal_backends_agree(rng):
    for _ in range(50):
        n = int(rng.integers(2, 40))
        m = int(rng.integers(1, 80))
        a, b = rng.integers(0, n, m), rng.integers(0, n, m)
        for keep in (False, True):
            assert np.array_equal(kn._kruskal_numba(n, a.astype(np.int64), b.astype(np.int64), keep),
                                  kn._kruskal_python(n, a, b, keep))


def _random_bipartite(rng):
    nl, nr = int(rng.integers(1, 12)), int(rng.integers(1, 12))
    rows = [np.flatnonzero(rng.random(nr) < rng.random()) for _ in range(nl)]
    ptr = np.zeros(nl + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=ptr[1:])
    adj = np.concatenate(rows).astype(np.int64) if ptr[-1] else np.zeros(0, dtype=np.int64)
    return nl, nr, ptr, adj


def test_matching_simple():
    assert kn.max_matching(3, 3, np.array([0, 3, 6, 9]), np.array([0, 1, 2] * 3)) == 3
    assert kn.max_matching(3, 3, np.array([0, 1, 2, 3]), np.array([0, 0, 0])) == 1
    assert kn.max_matching(0, 3, np.array([0]), np.array([], dtype=np.int64)) == 0


@needs_numba
def test_matching_backends_agree(rng):
    for _ in range(300):
        nl, nr, ptr, adj = _random_bipartite(rng)
        assert kn._matching_numba(nl, nr, ptr, adj) == kn._matching_python(nl, nr, ptr, adj)


def test_env_flag_selects_fallback():
    code = "import contracta._kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"CONTRACTA_DISABLE_NUMBA": "1", "PATH": ""}, check=True)
    assert out.stdout.strip() == "python"
