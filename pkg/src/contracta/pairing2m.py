"""Persistence pairing of closed triangulated surfaces by spanning trees.

Vertex-edge pairs come from Kruskal on the vertex graph (ascending edge
order, the earlier root survives); edge-triangle pairs come from Kruskal
on the dual triangle graph (descending edge order, the later root survives
and the edge is paired with the earlier one). Edges used by neither tree
carry essential 1-classes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .contraction import link_condition, normalize_edge
from .core import FilteredComplex
from .errors import InvariantViolation, LinkConditionViolated, NotClosed2Manifold
from .persistence import PersistencePairing

__all__ = ["DualGraphs", "PersistencePairing", "compute_pairing", "dual_graphs",
           "is_admissible", "verify_closed_2manifold"]


@dataclass
class DualGraphs:
    """Arc lists of the vertex graph and of the triangle graph.

    Arc ``i`` of both graphs corresponds to edge ``edges[i]`` (ascending
    ids); weights are the edge heights.
    """

    edges: np.ndarray
    weights: np.ndarray
    vertex_arcs: np.ndarray
    triangle_arcs: np.ndarray
    vertices: np.ndarray
    triangles: np.ndarray


def _triangle_cofacets(K: FilteredComplex, edges: np.ndarray) -> np.ndarray:
    cptr, cidx = K.coboundary_csr
    counts = cptr[edges + 1] - cptr[edges]
    if len(edges) and not np.all(counts == 2):
        raise NotClosed2Manifold("an edge does not bound exactly two triangles")
    return np.stack([cidx[cptr[edges]], cidx[cptr[edges] + 1]], axis=1) if len(edges) \
        else np.empty((0, 2), dtype=np.int64)


def dual_graphs(K: FilteredComplex) -> DualGraphs:
    edges = K.of_dim(1)
    ptr, idx = K.boundary_csr
    ends = np.stack([idx[ptr[edges]], idx[ptr[edges] + 1]], axis=1) if len(edges) \
        else np.empty((0, 2), dtype=np.int64)
    return DualGraphs(edges, K.heights[edges], ends, _triangle_cofacets(K, edges),
                      K.of_dim(0), K.of_dim(2))


def verify_closed_2manifold(K: FilteredComplex) -> bool:
    """Every edge bounds two triangles and every vertex link is one cycle."""
    if len(K) == 0 or K.dim != 2:
        return False
    cptr, _ = K.coboundary_csr
    edges = K.of_dim(1)
    if not np.all(cptr[edges + 1] - cptr[edges] == 2):
        return False
    simp = K.simplices
    for x, star in K.vertex_star.items():
        adj: dict = {}
        for t in star:
            s = simp[t]
            if len(s) != 3:
                continue
            a, b = (y for y in s if y != x)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if not adj or any(len(nb) != 2 for nb in adj.values()):
            return False
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            return False
    return True


def compute_pairing(K: FilteredComplex, check: bool = True) -> PersistencePairing:
    """Pairing of a closed surface via the two Kruskal passes."""
    if check and not verify_closed_2manifold(K):
        raise NotClosed2Manifold("complex is not a closed triangulated 2-manifold")
    g = dual_graphs(K)
    pairs = []

    # vertex graph: node index = rank among vertices, which preserves the order
    vrank = np.full(len(K), -1, dtype=np.int64)
    vrank[g.vertices] = np.arange(len(g.vertices))
    killed = _kernels.kruskal_kill(len(g.vertices), vrank[g.vertex_arcs[:, 0]],
                                   vrank[g.vertex_arcs[:, 1]], keep_max=False)
    neg = killed >= 0
    pairs.extend(zip(g.vertices[killed[neg]].tolist(), g.edges[neg].tolist()))

    # triangle graph, arcs by descending edge order
    trank = np.full(len(K), -1, dtype=np.int64)
    trank[g.triangles] = np.arange(len(g.triangles))
    rev = np.arange(len(g.edges))[::-1]
    tkilled = _kernels.kruskal_kill(len(g.triangles), trank[g.triangle_arcs[rev, 0]],
                                    trank[g.triangle_arcs[rev, 1]], keep_max=True)
    pos = tkilled >= 0
    if np.any(neg[rev][pos]):
        raise InvariantViolation("an edge is paired in both spanning trees")
    pairs.extend(zip(g.edges[rev][pos].tolist(), g.triangles[tkilled[pos]].tolist()))

    paired = np.zeros(len(K), dtype=bool)
    for a, b in pairs:
        paired[a] = paired[b] = True
    return PersistencePairing.from_lists(pairs, np.flatnonzero(~paired).tolist())


def is_admissible(K: FilteredComplex, e, P: PersistencePairing) -> bool:
    """Pairing-preservation test for contracting ``e`` on a closed surface.

    ``e = {u, v}`` must be paired with ``v``, and each of its two triangles
    with the later of the two mirrored edges it contains.
    """
    u, v, eid = normalize_edge(K, e)
    if not link_condition(K, eid):
        raise LinkConditionViolated(f"edge {(u, v)!r} violates the link condition")
    cof = K.cofacets(eid)
    if K.dim != 2 or len(cof) != 2:
        raise NotClosed2Manifold("edge does not bound exactly two triangles")
    pairs = P.pair_set()
    if (K.id_of((v,)), eid) not in pairs:
        return False
    for t in cof:
        (w,) = (x for x in K.simplices[t] if x != u and x != v)
        later = max(K.id_of((u, w)), K.id_of((v, w)))
        if (later, t) not in pairs:
            return False
    return True
