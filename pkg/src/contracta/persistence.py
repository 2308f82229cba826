"""Persistence pairings, diagrams, bottleneck distance, homology tests.

Everything here works over the two-element field. :func:`reduce` is the
classical left-to-right column reduction and serves as the ground truth the
other pairing code is checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .contraction import Chain, boundary, check_chain
from .core import FilteredComplex
from .errors import DimensionMismatch, DimensionOutOfRange, InputError, NotACycle


@dataclass(frozen=True)
class PersistencePairing:
    """Creator/destroyer pairs plus unpaired (essential) simplices, as ids."""

    pairs: tuple
    essential: tuple

    @classmethod
    def from_lists(cls, pairs: Iterable, essential: Iterable) -> "PersistencePairing":
        return cls(tuple(sorted((int(a), int(b)) for a, b in pairs)),
                   tuple(sorted(int(s) for s in essential)))

    def pair_set(self) -> set:
        return set(self.pairs)

    def partner_map(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def as_vertices(self, K: FilteredComplex) -> tuple[set, set]:
        simp = K.simplices
        return ({(simp[a], simp[b]) for a, b in self.pairs},
                {simp[s] for s in self.essential})

    def check(self, K: FilteredComplex) -> None:
        """Assert the structural invariants of a pairing of ``K``."""
        seen = set()
        for a, b in self.pairs:
            if not a < b or K.dims[b] != K.dims[a] + 1:
                raise AssertionError(f"bad pair {(a, b)}")
            seen.update((a, b))
        if seen & set(self.essential):
            raise AssertionError("essential simplex also paired")
        if len(seen) != 2 * len(self.pairs) or len(seen) + len(self.essential) != len(K):
            raise AssertionError("pairing does not partition the complex")


def reduce(K: FilteredComplex, twist: bool = False) -> PersistencePairing:
    """Column reduction of the boundary matrix in total order."""
    ptr, idx = K.boundary_csr
    low = _kernels.reduce_low(ptr, idx, K.dims, twist=twist)
    cols = np.flatnonzero(low >= 0)
    pairs = list(zip(low[cols].tolist(), cols.tolist()))
    paired = np.zeros(len(K), dtype=bool)
    paired[cols] = True
    paired[low[cols]] = True
    return PersistencePairing.from_lists(pairs, np.flatnonzero(~paired).tolist())


class PersistenceDiagram:
    """Multiset of ``(birth, death, dim)`` points; deaths may be ``inf``.

    Points on the diagonal are never stored.
    """

    __slots__ = ("births", "deaths", "dims")

    def __init__(self, points: Iterable = ()):
        pts = [(float(b), float(d), int(p)) for b, d, p in points]
        pts = [t for t in pts if t[1] != t[0]]
        for b, d, _ in pts:
            if not d >= b:
                raise ValueError(f"death {d} precedes birth {b}")
        pts.sort(key=lambda t: (t[2], t[0], t[1]))
        self.births = np.array([t[0] for t in pts], dtype=np.float64)
        self.deaths = np.array([t[1] for t in pts], dtype=np.float64)
        self.dims = np.array([t[2] for t in pts], dtype=np.int64)

    @property
    def points(self) -> list[tuple[float, float, int]]:
        return list(zip(self.births.tolist(), self.deaths.tolist(), self.dims.tolist()))

    def __len__(self):
        return len(self.births)

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return self.points == other.points

    def __repr__(self):
        return f"PersistenceDiagram({self.points!r})"

    def restrict(self, dim: int) -> "PersistenceDiagram":
        m = self.dims == dim
        return PersistenceDiagram(zip(self.births[m], self.deaths[m], self.dims[m]))

    def dimensions(self) -> list[int]:
        return sorted(set(self.dims.tolist()))


def diagram(P: PersistencePairing, K: FilteredComplex, p: int) -> PersistenceDiagram:
    """Dimension-``p`` diagram; zero-persistence pairs are dropped."""
    if p < 0 or (len(K) and p > K.dim):
        raise DimensionOutOfRange(f"dimension {p} outside 0..{K.dim}")
    h, dims = K.heights, K.dims
    pts = [(h[a], h[b], p) for a, b in P.pairs if dims[a] == p and h[a] != h[b]]
    pts += [(h[s], math.inf, p) for s in P.essential if dims[s] == p]
    return PersistenceDiagram(pts)


def diagrams(K: FilteredComplex, dims: Iterable[int] | None = None) -> dict[int, PersistenceDiagram]:
    P = reduce(K)
    dims = range(K.dim + 1) if dims is None else dims
    return {p: diagram(P, K, p) for p in dims}


# -- bottleneck distance --------------------------------------------------------

def _linf(b1, d1, b2, d2):
    return np.maximum(np.abs(b1[:, None] - b2[None, :]), np.abs(d1[:, None] - d2[None, :]))


def _feasible(delta, dist, half1, half2) -> bool:
    n1, n2 = dist.shape
    # left: D1 points, then diagonal copies of D2; right: D2 points, then diagonal copies of D1
    rows = []
    for i in range(n1):
        nb = np.flatnonzero(dist[i] <= delta)
        if half1[i] <= delta:
            nb = np.append(nb, n2 + i)
        rows.append(nb)
    diag_targets = np.arange(n2, n2 + n1)
    for j in range(n2):
        nb = diag_targets
        if half2[j] <= delta:
            nb = np.concatenate(([j], diag_targets))
        rows.append(nb)
    if any(len(r) == 0 for r in rows):
        return False
    ptr = np.zeros(n1 + n2 + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=ptr[1:])
    adj = np.concatenate(rows).astype(np.int64)
    return _kernels.max_matching(n1 + n2, n1 + n2, ptr, adj) == n1 + n2


def _bottleneck_finite(b1, d1, b2, d2) -> float:
    n1, n2 = len(b1), len(b2)
    if n1 == 0 and n2 == 0:
        return 0.0
    half1 = (d1 - b1) / 2.0
    half2 = (d2 - b2) / 2.0
    dist = _linf(b1, d1, b2, d2)
    cands = np.unique(np.concatenate(([0.0], half1, half2, dist.ravel())))
    lo, hi = 0, len(cands) - 1
    # the largest candidate always admits a perfect matching
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cands[mid], dist, half1, half2):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck(D1: PersistenceDiagram, D2: PersistenceDiagram, dim: int | None = None) -> float:
    """Exact bottleneck distance under the L-infinity ground metric.

    With ``dim`` given only that dimension is compared; otherwise the
    result is the maximum over all dimensions present. Points with infinite
    death can only be matched to each other, so differing counts give
    ``inf``.
    """
    dims = [dim] if dim is not None else sorted(set(D1.dimensions()) | set(D2.dimensions()))
    worst = 0.0
    for p in dims:
        m1, m2 = D1.dims == p, D2.dims == p
        b1, d1 = D1.births[m1], D1.deaths[m1]
        b2, d2 = D2.births[m2], D2.deaths[m2]
        inf1, inf2 = np.isinf(d1), np.isinf(d2)
        if inf1.sum() != inf2.sum():
            return math.inf
        if inf1.any():
            e1, e2 = np.sort(b1[inf1]), np.sort(b2[inf2])
            worst = max(worst, float(np.max(np.abs(e1 - e2))))
        worst = max(worst, _bottleneck_finite(b1[~inf1], d1[~inf1], b2[~inf2], d2[~inf2]))
    return worst


# -- GF(2) linear algebra on chains ---------------------------------------------

class EchelonBasis:
    """Incrementally reduced GF(2) vectors (Python ints as bitsets)."""

    def __init__(self):
        self.pivots: dict[int, int] = {}
        self.tags: dict[int, int] = {}

    def reduce(self, vec: int, tag: int = 0) -> tuple[int, int]:
        while vec:
            top = vec.bit_length() - 1
            other = self.pivots.get(top)
            if other is None:
                break
            vec ^= other
            tag ^= self.tags[top]
        return vec, tag

    def add(self, vec: int, tag: int = 0) -> tuple[int, int]:
        """Insert ``vec``; returns its reduced form and accumulated tag."""
        vec, tag = self.reduce(vec, tag)
        if vec:
            top = vec.bit_length() - 1
            self.pivots[top] = vec
            self.tags[top] = tag
        return vec, tag

    def contains(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0


def _bits(ids: Iterable[int]) -> int:
    out = 0
    for s in ids:
        out ^= 1 << int(s)
    return out


def _members(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _require_in_sublevel(K: FilteredComplex, a: float, c: Chain) -> None:
    for s in c.simplices:
        if K.heights[s] > a:
            raise InputError(f"simplex {K.simplices[s]!r} is not in the sublevel set at {a}")


def is_cycle(K: FilteredComplex, c: Chain) -> bool:
    return c.dim == 0 or not boundary(K, c)


def homologous(K: FilteredComplex, a: float, c1: Chain, c2: Chain) -> bool:
    """Whether ``c1 + c2`` bounds in the sublevel complex at ``a``."""
    if c1.dim != c2.dim and c1.simplices and c2.simplices:
        raise DimensionMismatch("cycles of different dimensions")
    p = c1.dim if c1.simplices else c2.dim
    for c in (c1, c2):
        check_chain(K, c)
        if not is_cycle(K, c):
            raise NotACycle("chain has nonzero boundary")
        _require_in_sublevel(K, a, c)
    target = _bits(c1.simplices ^ c2.simplices)
    if not target:
        return True
    basis = EchelonBasis()
    for t in np.flatnonzero((K.dims == p + 1) & (K.heights <= a)):
        basis.add(_bits(K.facets(int(t))))
    return basis.contains(target)


def cycle_basis(K: FilteredComplex, p: int, a: float = math.inf) -> list[Chain]:
    """A basis of the ``p``-cycles supported in the sublevel complex at ``a``."""
    basis = EchelonBasis()
    out = []
    for s in np.flatnonzero((K.dims == p) & (K.heights <= a)):
        s = int(s)
        vec = _bits(K.facets(s)) if p > 0 else 0
        red, tag = basis.add(vec, 1 << s)
        if not red:
            out.append(Chain(p, frozenset(_members(tag))))
    return out


def boundary_basis(K: FilteredComplex, p: int, a: float = math.inf) -> list[Chain]:
    """A basis of the ``p``-boundaries in the sublevel complex at ``a``.

    Made of boundaries of single ``(p+1)``-simplices, skipping dependent ones.
    """
    basis = EchelonBasis()
    out = []
    for t in np.flatnonzero((K.dims == p + 1) & (K.heights <= a)):
        facets = K.facets(int(t))
        if basis.add(_bits(facets))[0]:
            out.append(Chain(p, frozenset(facets)))
    return out
