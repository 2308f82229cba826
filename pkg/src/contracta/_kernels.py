"""Hot inner loops: column reduction, Kruskal union-find, bipartite matching.

Each kernel has a numba ``@njit`` implementation and a fallback that needs
only numpy, scipy and the standard library. Set ``CONTRACTA_DISABLE_NUMBA=1``
to force the fallback (also used when numba is not importable). Both paths
compute the same result; ``tests/test_kernels.py`` holds them to that.
"""
import os

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

_FLAG = os.environ.get("CONTRACTA_DISABLE_NUMBA", "").strip().lower()

try:
    if _FLAG in {"1", "true", "yes", "on"}:
        raise ImportError("numba disabled by CONTRACTA_DISABLE_NUMBA")
    from numba import njit
    from numba.typed import List as _NumbaList

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "python"


# ---------------------------------------------------------------------------
# boundary-matrix column reduction over GF(2)


def _reduce_python(ptr, idx, order, clear):
    n = len(ptr) - 1
    cols = [0] * n
    for j in range(n):
        bits = 0
        for r in idx[ptr[j]:ptr[j + 1]]:
            bits |= 1 << int(r)
        cols[j] = bits
    pivot = {}
    low = np.full(n, -1, dtype=np.int64)
    cleared = set()
    for j in order:
        j = int(j)
        if j in cleared:
            continue
        c = cols[j]
        while c:
            k = pivot.get(c.bit_length() - 1)
            if k is None:
                break
            c ^= cols[k]
        cols[j] = c
        if c:
            piv = c.bit_length() - 1
            pivot[piv] = j
            low[j] = piv
            if clear:
                cleared.add(piv)
    return low


if HAVE_NUMBA:

    @njit(cache=True)
    def _xor_sorted(a, b):
        out = np.empty(a.shape[0] + b.shape[0], dtype=np.int64)
        i = j = k = 0
        while i < a.shape[0] and j < b.shape[0]:
            if a[i] < b[j]:
                out[k] = a[i]
                i += 1
                k += 1
            elif a[i] > b[j]:
                out[k] = b[j]
                j += 1
                k += 1
            else:
                i += 1
                j += 1
        while i < a.shape[0]:
            out[k] = a[i]
            i += 1
            k += 1
        while j < b.shape[0]:
            out[k] = b[j]
            j += 1
            k += 1
        return out[:k]

    @njit(cache=True)
    def _reduce_numba(ptr, idx, order, clear):
        n = ptr.shape[0] - 1
        cols = _NumbaList()
        for j in range(n):
            cols.append(idx[ptr[j]:ptr[j + 1]].copy())
        pivot = np.full(n, -1, dtype=np.int64)
        low = np.full(n, -1, dtype=np.int64)
        cleared = np.zeros(n, dtype=np.bool_)
        for t in range(order.shape[0]):
            j = order[t]
            if cleared[j]:
                continue
            c = cols[j]
            while c.shape[0] > 0:
                k = pivot[c[c.shape[0] - 1]]
                if k < 0:
                    break
                c = _xor_sorted(c, cols[k])
            cols[j] = c
            if c.shape[0] > 0:
                piv = c[c.shape[0] - 1]
                pivot[piv] = j
                low[j] = piv
                if clear:
                    cleared[piv] = True
        return low


def reduce_low(ptr, idx, dims=None, twist=False):
    """Reduce a sparse GF(2) boundary matrix; return ``low`` per column.

    ``ptr``/``idx`` are CSC-style: column ``j`` holds the sorted row indices
    ``idx[ptr[j]:ptr[j+1]]``. ``low[j]`` is the lowest nonzero row of the
    reduced column, or -1 for a zero column. With ``twist=True`` columns are
    processed by descending dimension and positive columns are cleared
    (requires ``dims``); the resulting pairing is identical.
    """
    ptr = np.ascontiguousarray(ptr, dtype=np.int64)
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    n = len(ptr) - 1
    if twist:
        if dims is None:
            raise ValueError("twist reduction needs simplex dimensions")
        order = np.lexsort((np.arange(n), -np.asarray(dims, dtype=np.int64)))
    else:
        order = np.arange(n, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    if HAVE_NUMBA:
        return _reduce_numba(ptr, idx, order, bool(twist))
    return _reduce_python(ptr, idx, order, bool(twist))


# ---------------------------------------------------------------------------
# Kruskal with labelled roots


def _kruskal_python(n_nodes, arc_a, arc_b, keep_max):
    parent = list(range(n_nodes))
    size = [1] * n_nodes
    label = list(range(n_nodes))
    killed = np.full(len(arc_a), -1, dtype=np.int64)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(arc_a)):
        ra, rb = find(int(arc_a[i])), find(int(arc_b[i]))
        if ra == rb:
            continue
        la, lb = label[ra], label[rb]
        if keep_max:
            survivor, dead = max(la, lb), min(la, lb)
        else:
            survivor, dead = min(la, lb), max(la, lb)
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
        label[ra] = survivor
        killed[i] = dead
    return killed


if HAVE_NUMBA:

    @njit(cache=True)
    def _find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @njit(cache=True)
    def _kruskal_numba(n_nodes, arc_a, arc_b, keep_max):
        parent = np.arange(n_nodes, dtype=np.int64)
        size = np.ones(n_nodes, dtype=np.int64)
        label = np.arange(n_nodes, dtype=np.int64)
        killed = np.full(arc_a.shape[0], -1, dtype=np.int64)
        for i in range(arc_a.shape[0]):
            ra = _find(parent, arc_a[i])
            rb = _find(parent, arc_b[i])
            if ra == rb:
                continue
            la = label[ra]
            lb = label[rb]
            if keep_max:
                survivor = max(la, lb)
                dead = min(la, lb)
            else:
                survivor = min(la, lb)
                dead = max(la, lb)
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
            label[ra] = survivor
            killed[i] = dead
        return killed


def kruskal_kill(n_nodes, arc_a, arc_b, keep_max=False):
    """Run Kruskal over arcs in the given order with labelled roots.

    Node indices must be ranks in the total order. When an arc joins two
    trees, the surviving label is the smaller rank (``keep_max=False``) or
    the larger one (``keep_max=True``); ``killed[i]`` is the other label, or
    -1 if arc ``i`` closed a cycle.
    """
    arc_a = np.ascontiguousarray(arc_a, dtype=np.int64)
    arc_b = np.ascontiguousarray(arc_b, dtype=np.int64)
    if HAVE_NUMBA:
        return _kruskal_numba(int(n_nodes), arc_a, arc_b, bool(keep_max))
    return _kruskal_python(int(n_nodes), arc_a, arc_b, bool(keep_max))


# ---------------------------------------------------------------------------
# maximum bipartite matching (feasibility test for the bottleneck distance)


def _matching_python(n_left, n_right, ptr, adj):
    if n_left == 0 or n_right == 0:
        return 0
    data = np.ones(len(adj), dtype=np.int8)
    graph = csr_matrix((data, adj, ptr), shape=(n_left, n_right))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int(np.count_nonzero(match >= 0))


if HAVE_NUMBA:

    @njit(cache=True)
    def _matching_numba(n_left, n_right, ptr, adj):
        # Hopcroft-Karp with an explicit DFS stack
        inf = np.int64(1) << 60
        match_l = np.full(n_left, -1, dtype=np.int64)
        match_r = np.full(n_right, -1, dtype=np.int64)
        dist = np.empty(n_left, dtype=np.int64)
        queue = np.empty(n_left, dtype=np.int64)
        stack = np.empty(n_left + 1, dtype=np.int64)
        size = 0
        while True:
            head = 0
            tail = 0
            for u in range(n_left):
                if match_l[u] < 0:
                    dist[u] = 0
                    queue[tail] = u
                    tail += 1
                else:
                    dist[u] = inf
            found = False
            while head < tail:
                u = queue[head]
                head += 1
                for k in range(ptr[u], ptr[u + 1]):
                    m = match_r[adj[k]]
                    if m < 0:
                        found = True
                    elif dist[m] == inf:
                        dist[m] = dist[u] + 1
                        queue[tail] = m
                        tail += 1
            if not found:
                break
            it = ptr[:-1].copy()
            for s in range(n_left):
                if match_l[s] >= 0:
                    continue
                top = 0
                stack[0] = s
                done = False
                while top >= 0 and not done:
                    u = stack[top]
                    pushed = False
                    while it[u] < ptr[u + 1]:
                        w = adj[it[u]]
                        m = match_r[w]
                        if m < 0:
                            for i in range(top, -1, -1):
                                x = stack[i]
                                y = adj[it[x]]
                                match_l[x] = y
                                match_r[y] = x
                            size += 1
                            done = True
                            break
                        if dist[m] == dist[u] + 1:
                            top += 1
                            stack[top] = m
                            pushed = True
                            break
                        it[u] += 1
                    if done or pushed:
                        continue
                    dist[u] = inf
                    top -= 1
                    if top >= 0:
                        it[stack[top]] += 1
        return size


def max_matching(n_left, n_right, ptr, adj):
    """Size of a maximum matching in a bipartite graph given as CSR rows."""
    ptr = np.ascontiguousarray(ptr, dtype=np.int64)
    adj = np.ascontiguousarray(adj, dtype=np.int64)
    if HAVE_NUMBA:
        if n_left == 0 or n_right == 0:
            return 0
        return int(_matching_numba(int(n_left), int(n_right), ptr, adj))
    return _matching_python(int(n_left), int(n_right), ptr, adj)
