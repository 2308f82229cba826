"""Filtered simplicial complexes.

A complex stores its simplices as sorted vertex tuples listed in the total
order: the ``SimplexId`` of a simplex is its position in that order, so
``i < j`` means simplex ``i`` precedes simplex ``j``. Heights are float64 and
compared exactly. Complexes are immutable once built; incidence tables are
computed lazily on first use.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateSimplex,
    InvariantViolation,
    MissingFace,
    NonMonotoneHeight,
    UnknownSimplex,
    UnknownVertex,
)

Vertex = Hashable
Simplex = tuple


class FilteredComplex:
    """Immutable filtered complex with simplices in total order.

    Use :func:`build_complex` or :func:`lower_star_extend` to construct one
    from raw data; the constructor trusts its input apart from cheap checks.

    Parameters
    ----------
    simplices : sequence of tuple
        Sorted vertex tuples, already in the total order.
    heights : array_like
        Height of each simplex, aligned with ``simplices``.
    coords : mapping, optional
        Vertex -> coordinate payload, carried through contractions.
    """

    def __init__(self, simplices: Sequence[Simplex], heights, coords: Mapping | None = None):
        self.simplices: list[Simplex] = list(simplices)
        self.heights = np.asarray(heights, dtype=np.float64).copy()
        self.heights.setflags(write=False)
        if len(self.heights) != len(self.simplices):
            raise ValueError("heights and simplices differ in length")
        self.dims = np.fromiter((len(s) - 1 for s in self.simplices), dtype=np.int64,
                                count=len(self.simplices))
        self.dims.setflags(write=False)
        self.index: dict[Simplex, int] = dict(zip(self.simplices, range(len(self.simplices))))
        if len(self.index) != len(self.simplices):
            raise DuplicateSimplex("complex lists a simplex twice")
        self.coords = dict(coords) if coords is not None else None
        n = len(self.simplices)
        self._dim = int(self.dims.max()) if n else -1
        if n > 1:
            h, d = self.heights, self.dims
            bad = (h[1:] < h[:-1]) | ((h[1:] == h[:-1]) & (d[1:] < d[:-1]))
            if bad.any():
                raise InvariantViolation("simplex order is not sorted by (height, dim)")

    # -- basic accessors ---------------------------------------------------

    def __len__(self):
        return len(self.simplices)

    def __contains__(self, vertices):
        return tuple(vertices) in self.index

    def __repr__(self):
        counts = np.bincount(self.dims) if len(self) else []
        return f"FilteredComplex(counts={list(counts)})"

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def order(self) -> np.ndarray:
        """Permutation realizing the total order (identity by construction)."""
        return np.arange(len(self), dtype=np.int64)

    def id_of(self, vertices) -> int:
        key = vertices if isinstance(vertices, tuple) else tuple(vertices)
        try:
            return self.index[key]
        except KeyError:
            try:
                return self.index[tuple(sorted(key))]
            except (KeyError, TypeError):
                raise UnknownSimplex(f"simplex {key!r} is not in the complex") from None

    def height(self, sid: int) -> float:
        return float(self.heights[sid])

    def of_dim(self, d: int) -> np.ndarray:
        return np.flatnonzero(self.dims == d)

    def count(self, d: int) -> int:
        return int(np.count_nonzero(self.dims == d))

    def vertices(self) -> list:
        return [s[0] for s in self.simplices if len(s) == 1]

    def precedes(self, a: int, b: int) -> bool:
        return a < b

    # -- incidence -----------------------------------------------------------

    def facets(self, sid: int) -> list[int]:
        s = self.simplices[sid]
        if len(s) == 1:
            return []
        idx = self.index
        return sorted(idx[s[:i] + s[i + 1:]] for i in range(len(s)))

    @cached_property
    def boundary_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Facet lists as CSR arrays ``(ptr, idx)`` with sorted rows."""
        idx = self.index
        ptr = np.zeros(len(self) + 1, dtype=np.int64)
        rows: list[int] = []
        for j, s in enumerate(self.simplices):
            if len(s) > 1:
                rows.extend(sorted(idx[s[:i] + s[i + 1:]] for i in range(len(s))))
            ptr[j + 1] = len(rows)
        return ptr, np.asarray(rows, dtype=np.int64)

    @cached_property
    def coboundary_csr(self) -> tuple[np.ndarray, np.ndarray]:
        ptr, idx = self.boundary_csr
        n = len(self)
        cols = np.repeat(np.arange(n, dtype=np.int64), np.diff(ptr))
        perm = np.lexsort((cols, idx))
        counts = np.bincount(idx, minlength=n) if len(idx) else np.zeros(n, dtype=np.int64)
        cptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=cptr[1:])
        return cptr, cols[perm]

    def cofacets(self, sid: int) -> list[int]:
        ptr, idx = self.coboundary_csr
        return idx[ptr[sid]:ptr[sid + 1]].tolist()

    @cached_property
    def vertex_star(self) -> dict:
        """Vertex -> ascending list of ids of simplices containing it."""
        table: dict = {}
        for sid, s in enumerate(self.simplices):
            for x in s:
                table.setdefault(x, []).append(sid)
        return table

    def star_of_vertices(self, vs: Iterable) -> list[int]:
        """Ids of simplices containing every vertex in ``vs`` (ascending)."""
        vs = tuple(vs)
        table = self.vertex_star
        try:
            base = min((table[x] for x in vs), key=len)
        except KeyError as exc:
            raise UnknownVertex(f"vertex {exc.args[0]!r} is not in the complex") from None
        if len(vs) == 1:
            return list(base)
        need = set(vs)
        simp = self.simplices
        return [t for t in base if need.issubset(simp[t])]

    def validate(self) -> None:
        """Check closure, monotone heights and face-before-coface order."""
        idx = self.index
        for sid, s in enumerate(self.simplices):
            if len(s) == 1:
                continue
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                fid = idx.get(f)
                if fid is None:
                    raise MissingFace(f"facet {f!r} of {s!r} is missing")
                if self.heights[fid] > self.heights[sid]:
                    raise NonMonotoneHeight(f"h({f!r}) > h({s!r})")
                if fid >= sid:
                    raise InvariantViolation(f"face {f!r} does not precede {s!r}")


def _normalize(vertices) -> Simplex:
    s = tuple(sorted(vertices))
    if not s:
        raise ValueError("empty simplex")
    if len(set(s)) != len(s):
        raise ValueError(f"repeated vertex in {s!r}")
    return s


def build_complex(simplex_list: Iterable, coords: Mapping | None = None) -> FilteredComplex:
    """Validate ``(vertices, height)`` pairs and order them.

    The total order sorts by height, then dimension, then the sorted vertex
    tuple. Missing faces are reported, never inserted.

    Raises
    ------
    DuplicateSimplex, MissingFace, NonMonotoneHeight
    """
    heights: dict[Simplex, float] = {}
    for vertices, h in simplex_list:
        s = _normalize(vertices)
        if s in heights:
            raise DuplicateSimplex(f"simplex {s!r} listed twice")
        heights[s] = float(h)
    for s, h in heights.items():
        if len(s) == 1:
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            hf = heights.get(f)
            if hf is None:
                raise MissingFace(f"facet {f!r} of {s!r} is missing")
            if hf > h:
                raise NonMonotoneHeight(f"h({f!r}) = {hf} > h({s!r}) = {h}")
    ordered = sorted(heights, key=lambda s: (heights[s], len(s), s))
    return FilteredComplex(ordered, [heights[s] for s in ordered], coords=coords)


def lower_star_extend(vertex_heights: Mapping, skeleton: Iterable,
                      coords: Mapping | None = None) -> FilteredComplex:
    """Give every simplex the maximum height of its vertices."""
    items = []
    for vertices in skeleton:
        s = _normalize(vertices)
        try:
            h = max(vertex_heights[x] for x in s)
        except KeyError as exc:
            raise UnknownVertex(f"no height for vertex {exc.args[0]!r}") from None
        items.append((s, h))
    return build_complex(items, coords=coords)


def closed_skeleton(top_simplices: Iterable) -> list[Simplex]:
    """All faces of the given simplices (the closure), as sorted tuples."""
    out = set()
    for t in top_simplices:
        t = _normalize(t)
        for k in range(1, len(t) + 1):
            out.update(combinations(t, k))
    return sorted(out, key=lambda s: (len(s), s))


# -- closure / star / link on simplex-id sets --------------------------------

def _check_ids(K: FilteredComplex, ids) -> list[int]:
    out = []
    for sid in ids:
        sid = int(sid)
        if not 0 <= sid < len(K):
            raise UnknownSimplex(f"simplex id {sid} is not in the complex")
        out.append(sid)
    return out


def closure(K: FilteredComplex, ids: Iterable[int]) -> set[int]:
    """All faces of the given simplices, themselves included."""
    result = set()
    simp, idx = K.simplices, K.index
    for sid in _check_ids(K, ids):
        s = simp[sid]
        for k in range(1, len(s) + 1):
            for f in combinations(s, k):
                result.add(idx[f])
    return result


def star(K: FilteredComplex, ids: Iterable[int]) -> set[int]:
    """All cofaces of the given simplices, themselves included."""
    result = set()
    for sid in _check_ids(K, ids):
        result.update(K.star_of_vertices(K.simplices[sid]))
    return result


def link(K: FilteredComplex, sid: int) -> set[int]:
    """``closure(star(s)) - star(closure(s))``."""
    (sid,) = _check_ids(K, [sid])
    return closure(K, star(K, [sid])) - star(K, closure(K, [sid]))


def link_vertices(K: FilteredComplex, vertices) -> set[Simplex]:
    """Link of a simplex given by its vertices, returned as vertex tuples."""
    return {K.simplices[t] for t in link(K, K.id_of(vertices))}


def sublevel(K: FilteredComplex, a: float) -> np.ndarray:
    """Ids of simplices with height <= ``a``, in total order."""
    return np.flatnonzero(K.heights <= a)
