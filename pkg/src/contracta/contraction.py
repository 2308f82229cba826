"""Edge contraction as a simplicial map.

Contracting ``{u, v}`` (with ``u`` preceding ``v``) relabels ``v`` to ``u``.
Simplices containing both endpoints are *vanishing*; faces of those that
contain exactly one endpoint are *mirrored* and come in pairs that collapse
onto one image; non-local simplices with a mirrored facet are *adjacent*.
The contracted complex takes, for every image, the minimum height over its
preimages and the position of its first preimage in the total order.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import FilteredComplex, link
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    LinkConditionViolated,
    UnknownEdge,
    UnknownSimplex,
)


@dataclass(frozen=True)
class SimplexClass:
    tag: str
    partner: int | None = None

    def __repr__(self):
        if self.tag == "mirrored":
            return f"Mirrored({self.partner})"
        return self.tag.capitalize()


VANISHING = SimplexClass("vanishing")
ADJACENT = SimplexClass("adjacent")
NONLOCAL = SimplexClass("nonlocal")


def mirrored(partner: int) -> SimplexClass:
    return SimplexClass("mirrored", partner)


def normalize_edge(K: FilteredComplex, e) -> tuple:
    """Return ``(u, v, edge_id)`` with ``u`` preceding ``v`` in ``K``.

    ``e`` may be a simplex id or a pair of vertices.
    """
    if isinstance(e, (int, np.integer)):
        if not 0 <= e < len(K) or K.dims[e] != 1:
            raise UnknownEdge(f"simplex {e} is not an edge of the complex")
        a, b = K.simplices[e]
    else:
        a, b = e
    try:
        eid = K.id_of((a, b))
        ia, ib = K.id_of((a,)), K.id_of((b,))
    except UnknownSimplex:
        raise UnknownEdge(f"edge {(a, b)!r} is not in the complex") from None
    if ia > ib:
        a, b = b, a
    return a, b, eid


@dataclass
class LocalStructure:
    """Local simplices of an edge, keyed by simplex id."""

    u: object
    v: object
    edge: int
    vanishing: list[int]
    partner: dict[int, int]
    cofacet: dict[int, int]
    adjacent: list[int] = field(default_factory=list)

    def mirror_pairs(self, dim: int, K: FilteredComplex):
        """``(earlier, later, cofacet)`` for each mirror pair of dimension ``dim``."""
        out = []
        for a, b in self.partner.items():
            if a < b and K.dims[a] == dim:
                out.append((a, b, self.cofacet[a]))
        return out


def local_structure(K: FilteredComplex, e, with_adjacent: bool = True) -> LocalStructure:
    u, v, eid = normalize_edge(K, e)
    simp, idx = K.simplices, K.index
    vanishing = K.star_of_vertices((u, v))
    partner: dict[int, int] = {}
    cofacet: dict[int, int] = {}
    for t in vanishing:
        s = simp[t]
        a = idx[tuple(x for x in s if x != v)]
        b = idx[tuple(x for x in s if x != u)]
        partner[a] = b
        partner[b] = a
        cofacet[a] = cofacet[b] = t
    loc = LocalStructure(u, v, eid, vanishing, partner, cofacet)
    if with_adjacent:
        vset = set(vanishing)
        adjacent = []
        for end in (u, v):
            for t in K.vertex_star[end]:
                if t in partner or t in vset or len(simp[t]) == 1:
                    continue
                s = simp[t]
                if any(idx[s[:i] + s[i + 1:]] in partner
                       for i in range(len(s)) if s[i] != end):
                    adjacent.append(t)
        loc.adjacent = sorted(adjacent)
    return loc


class Classification(Mapping):
    """Total map SimplexId -> SimplexClass; unlisted simplices are non-local."""

    def __init__(self, n: int, classes: dict[int, SimplexClass]):
        self._n = n
        self._classes = classes

    def __getitem__(self, sid):
        if not 0 <= sid < self._n:
            raise KeyError(sid)
        return self._classes.get(sid, NONLOCAL)

    def __iter__(self):
        return iter(range(self._n))

    def __len__(self):
        return self._n

    def local(self) -> dict[int, SimplexClass]:
        """Only the vanishing, mirrored and adjacent entries."""
        return dict(self._classes)

    def with_tag(self, tag: str) -> list[int]:
        return sorted(s for s, c in self._classes.items() if c.tag == tag)


def classify(K: FilteredComplex, e) -> Classification:
    loc = local_structure(K, e)
    classes: dict[int, SimplexClass] = {t: VANISHING for t in loc.vanishing}
    for a, b in loc.partner.items():
        classes[a] = mirrored(b)
    for t in loc.adjacent:
        classes[t] = ADJACENT
    return Classification(len(K), classes)


def link_condition(K: FilteredComplex, e) -> bool:
    """``lk(uv) == lk(u) & lk(v)``."""
    u, v, eid = normalize_edge(K, e)
    lu = link(K, K.id_of((u,)))
    lv = link(K, K.id_of((v,)))
    return link(K, eid) == (lu & lv)


@dataclass
class ContractionRecord:
    """The map from a complex to its contraction along ``edge``.

    ``image[s]`` is the id in ``contracted`` of the image of source simplex
    ``s`` (a vanishing simplex maps to the lower-dimensional image of its
    mirrored facets); ``preimages[t]`` lists source ids mapping to ``t``.
    """

    edge: tuple
    source: FilteredComplex
    contracted: FilteredComplex
    image: np.ndarray
    preimages: list[list[int]]
    local: LocalStructure | None = None


def _resolve(vmap: dict) -> dict:
    out = {}
    for x in vmap:
        y = vmap[x]
        seen = {x}
        while y in vmap:
            if y in seen:
                raise ValueError("cyclic vertex map")
            seen.add(y)
            y = vmap[y]
        out[x] = y
    return out


def relabel(K: FilteredComplex, vmap: dict):
    """Apply a vertex identification ``vmap`` (vertex -> survivor) to ``K``.

    Returns ``(K', image, preimages)``. Composing several contractions is a
    single relabel with the composed vertex map.
    """
    vmap = _resolve(vmap)
    moved = set(vmap)
    get = vmap.get
    new_simplices: list[tuple] = []
    new_heights: list[float] = []
    new_index: dict[tuple, int] = {}
    image = np.empty(len(K), dtype=np.int64)
    preimages: list[list[int]] = []
    heights = K.heights.tolist()
    for sid, s in enumerate(K.simplices):
        if moved.isdisjoint(s):
            t = s
        else:
            t = tuple(sorted({get(x, x) for x in s}))
        j = new_index.get(t)
        if j is None:
            if len(t) != len(s):
                raise InvariantViolation(f"image {t!r} of {s!r} appears before any "
                                         "same-dimensional preimage")
            j = len(new_simplices)
            new_index[t] = j
            new_simplices.append(t)
            new_heights.append(heights[sid])
            preimages.append([sid])
        else:
            if heights[sid] < new_heights[j]:
                new_heights[j] = heights[sid]
            preimages[j].append(sid)
        image[sid] = j
    coords = None
    if K.coords is not None:
        coords = {x: c for x, c in K.coords.items() if x not in moved}
    return FilteredComplex(new_simplices, new_heights, coords=coords), image, preimages


def contract(K: FilteredComplex, e, check: bool = True) -> ContractionRecord:
    """Contract edge ``e``; it must satisfy the link condition."""
    u, v, eid = normalize_edge(K, e)
    if check and not link_condition(K, eid):
        raise LinkConditionViolated(f"edge {(u, v)!r} violates the link condition")
    Kp, image, pre = relabel(K, {v: u})
    return ContractionRecord((u, v), K, Kp, image, pre, local_structure(K, eid))


# -- chains over GF(2) ----------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    dim: int
    simplices: frozenset = frozenset()

    def __add__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim and self.simplices and other.simplices:
            raise DimensionMismatch("adding chains of different dimensions")
        return Chain(self.dim, self.simplices ^ other.simplices)

    def __bool__(self):
        return bool(self.simplices)

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(sorted(self.simplices))


def make_chain(K: FilteredComplex, items: Iterable, dim: int | None = None) -> Chain:
    """Chain from simplex ids or vertex tuples (repeats cancel mod 2)."""
    acc: set[int] = set()
    for it in items:
        sid = int(it) if isinstance(it, (int, np.integer)) else K.id_of(it)
        acc ^= {sid}
    dims = {int(K.dims[s]) for s in acc}
    if dim is None:
        if len(dims) > 1:
            raise DimensionMismatch("mixed dimensions in chain")
        dim = dims.pop() if dims else 0
    elif dims - {dim}:
        raise DimensionMismatch(f"chain members are not all of dimension {dim}")
    return Chain(dim, frozenset(acc))


def check_chain(K: FilteredComplex, c: Chain) -> None:
    for s in c.simplices:
        if not 0 <= s < len(K):
            raise UnknownSimplex(f"chain member {s} is not in the complex")
        if K.dims[s] != c.dim:
            raise DimensionMismatch(f"simplex {K.simplices[s]!r} is not of dimension {c.dim}")


def boundary(K: FilteredComplex, c: Chain) -> Chain:
    acc: set[int] = set()
    for s in c.simplices:
        for f in K.facets(s):
            acc ^= {f}
    return Chain(max(c.dim - 1, 0), frozenset(acc))


def chain_vertices(K: FilteredComplex, c: Chain) -> set:
    return {K.simplices[s] for s in c.simplices}


def xi_chain(rec: ContractionRecord, c: Chain) -> Chain:
    """Push a chain on the source complex forward along the contraction.

    Simplices whose image drops a dimension contribute nothing; images hit
    twice cancel.
    """
    check_chain(rec.source, c)
    dims = rec.contracted.dims
    acc: set[int] = set()
    for s in c.simplices:
        t = int(rec.image[s])
        if dims[t] == c.dim:
            acc ^= {t}
    return Chain(c.dim, frozenset(acc))
