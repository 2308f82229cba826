"""Contractions with a bottleneck-distance guarantee.

An edge is (p, eps)-admissible when, for every pair of p-mirrors (and, for
p > 0, every pair of (p-1)-mirrors), the later mirror and the shared
vanishing cofacet differ in height by at most ``eps``. Contracting such an
edge moves the dimension-p diagram by at most ``eps``; edges whose p-windows
are pairwise disjoint can be contracted in sequence for a total of ``eps``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field


from .contraction import (
    Chain,
    ContractionRecord,
    check_chain,
    local_structure,
    normalize_edge,
    relabel,
)
from .core import FilteredComplex
from .errors import DimensionMismatch, DimensionOutOfRange, LinkConditionViolated

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Window:
    lo: float
    hi: float
    p: int
    edge: tuple

    def overlaps(self, other: "Window") -> bool:
        # closed intervals: a shared endpoint counts as overlap
        return not (self.hi < other.lo or other.hi < self.lo)


def link_condition_local(K: FilteredComplex, u, v) -> bool:
    """Link condition from vertex stars; equivalent to ``contraction.link_condition``.

    For a vertex ``x`` the link is ``{t - {x} : t in star(x), t != (x,)}``,
    and likewise for the edge; the link of the edge is always contained in
    the intersection, so comparing sizes suffices.
    """
    simp = K.simplices
    star_u = K.vertex_star[u]
    star_v = K.vertex_star[v]
    lk_u = {tuple(y for y in simp[t] if y != u) for t in star_u}
    lk_v = {tuple(y for y in simp[t] if y != v) for t in star_v}
    common = lk_u & lk_v
    common.discard(())
    n_edge_link = sum(1 for t in star_u if v in simp[t]) - 1
    return len(common) == n_edge_link


def admissibility_gap(K: FilteredComplex, e, p: int, loc=None) -> float:
    """Smallest eps for which ``e`` is (p, eps)-admissible."""
    if loc is None:
        loc = local_structure(K, e, with_adjacent=False)
    h = K.heights
    dims = K.dims
    gap = 0.0
    for a, b in loc.partner.items():
        if a > b:
            continue
        d = dims[a]
        if d == p or (p > 0 and d == p - 1):
            gap = max(gap, abs(h[b] - h[loc.cofacet[a]]))
    return float(gap)


def is_p_eps_admissible(K: FilteredComplex, e, p: int, eps: float) -> bool:
    u, v, eid = normalize_edge(K, e)
    if not link_condition_local(K, u, v):
        raise LinkConditionViolated(f"edge {(u, v)!r} violates the link condition")
    if math.isinf(eps) and eps > 0:
        return True
    return admissibility_gap(K, eid, p) <= eps


def psi_chain(rec: ContractionRecord, c: Chain, p: int) -> Chain:
    """Pull a ``p``-chain on the contracted complex back to the source.

    Each simplex goes to its earliest same-dimensional preimage ``t``, plus
    the vanishing cofacet of every mirrored facet ``eta`` of ``t`` whose
    mirror precedes ``eta``.
    """
    if c.dim != p and c.simplices:
        raise DimensionMismatch(f"chain of dimension {c.dim} given for p={p}")
    check_chain(rec.contracted, Chain(p, c.simplices))
    K = rec.source
    loc = rec.local if rec.local is not None else local_structure(K, rec.edge, with_adjacent=False)
    u, v = rec.edge
    simp, idx, dims = K.simplices, K.index, K.dims
    acc: set[int] = set()
    for s in c.simplices:
        t = min(x for x in rec.preimages[s] if dims[x] == p)
        acc ^= {t}
        st = simp[t]
        if p == 0 or (u not in st and v not in st):
            continue
        end = u if u in st else v
        for i, y in enumerate(st):
            if y == end:
                continue
            eta = idx[st[:i] + st[i + 1:]]
            partner = loc.partner.get(eta)
            if partner is not None and partner < eta:
                acc ^= {loc.cofacet[eta]}
    return Chain(p, frozenset(acc))


def window(K: FilteredComplex, e, p: int, loc=None) -> Window:
    """Height interval outside which contracting ``e`` leaves H_p alone."""
    u, v, eid = normalize_edge(K, e)
    if not 0 <= p <= K.dim:
        raise DimensionOutOfRange(f"dimension {p} outside 0..{K.dim}")
    if loc is None:
        if not link_condition_local(K, u, v):
            raise LinkConditionViolated(f"edge {(u, v)!r} violates the link condition")
        loc = local_structure(K, eid, with_adjacent=False)
    h, dims = K.heights, K.dims
    if p == 0:
        return Window(float(h[K.id_of((u,))]), float(h[eid]), p, (u, v))
    mirrors = [a for a in loc.partner if dims[a] == p - 1]
    if not mirrors:
        # no local p-simplices at all: a point window at the edge height
        return Window(float(h[eid]), float(h[eid]), p, (u, v))
    lo = float(min(h[a] for a in mirrors))
    upper = [t for t in loc.vanishing if dims[t] == p + 1] if p < K.dim else []
    if not upper:
        upper = [t for t in loc.vanishing if dims[t] == p]
    return Window(lo, float(max(h[t] for t in upper)), p, (u, v))


def admissible_candidates(K: FilteredComplex, p: int, eps: float) -> list[Window]:
    """Windows of all contractible (p, eps)-admissible edges."""
    out = []
    simp = K.simplices
    for eid in K.of_dim(1).tolist():
        a, b = simp[eid]
        u, v = (a, b) if K.index[(a,)] < K.index[(b,)] else (b, a)
        if not link_condition_local(K, u, v):
            continue
        loc = local_structure(K, eid, with_adjacent=False)
        if admissibility_gap(K, eid, p, loc) > eps:
            continue
        out.append(window(K, eid, p, loc))
    return out


def select_compatible(windows: list[Window]) -> list[Window]:
    """Greedy interval scheduling by right endpoint, vertex-disjoint edges."""
    chosen = []
    used = set()
    last_hi = -math.inf
    for w in sorted(windows, key=lambda w: (w.hi, w.lo, w.edge)):
        if w.lo <= last_hi:
            continue
        if used.intersection(w.edge):
            continue
        chosen.append(w)
        used.update(w.edge)
        last_hi = w.hi
    return chosen


def compatible_set(K: FilteredComplex, p: int, eps: float) -> list[tuple]:
    """A maximal set of admissible, vertex-disjoint edges with disjoint windows."""
    return [w.edge for w in select_compatible(admissible_candidates(K, p, eps))]


@dataclass
class Stage:
    contracted_edges: list
    windows: list
    simplices_before: int
    simplices_after: int
    skipped: int = 0
    d_b: float | None = None


@dataclass
class SimplificationLog:
    epsilon: float
    p: int
    stages: list = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.stages)

    @property
    def contractions(self) -> int:
        return sum(len(s.contracted_edges) for s in self.stages)

    def to_dict(self) -> dict:
        out = {"epsilon": self.epsilon, "p": self.p, "stages": []}
        for s in self.stages:
            d = asdict(s)
            d["contracted_edges"] = [list(e) for e in s.contracted_edges]
            d["windows"] = [[w.lo, w.hi] for w in s.windows]
            out["stages"].append(d)
        return out


def _neighbourhood(K: FilteredComplex, u, v) -> set:
    simp = K.simplices
    out = set()
    for x in (u, v):
        for t in K.vertex_star[x]:
            out.update(simp[t])
    return out


def contract_compatible(K: FilteredComplex, windows: list[Window], p: int, eps: float):
    """Contract selected edges in order, re-validating each one.

    An edge whose closed neighbourhood avoids every edge contracted since the
    last materialised complex has unchanged local simplices and heights, so
    its earlier validation still holds; otherwise the pending contractions
    are applied and the edge is checked again. Returns
    ``(K', accepted_windows, skipped)``.
    """
    work = K
    pending: dict = {}
    touched: set = set()
    accepted: list[Window] = []
    skipped = 0
    for w in windows:
        u, v = w.edge
        if touched.isdisjoint(_neighbourhood(work, u, v)):
            cand = w
        else:
            if pending:
                work = relabel(work, pending)[0]
                pending, touched = {}, set()
            if (u, v) not in work and (v, u) not in work:
                skipped += 1
                continue
            u, v, eid = normalize_edge(work, (u, v))
            if not link_condition_local(work, u, v):
                skipped += 1
                continue
            loc = local_structure(work, eid, with_adjacent=False)
            if admissibility_gap(work, eid, p, loc) > eps:
                skipped += 1
                continue
            cand = window(work, eid, p, loc)
        if any(cand.overlaps(a) for a in accepted):
            skipped += 1
            continue
        accepted.append(cand)
        pending[cand.edge[1]] = cand.edge[0]
        touched.update(cand.edge)
    if pending:
        work = relabel(work, pending)[0]
    return work, accepted, skipped


def simplify(K: FilteredComplex, p: int, eps: float, max_stages: int = 10**9,
             track_distances: bool = False):
    """Repeatedly contract maximal compatible sets until none remain.

    Returns ``(K_final, log)``. Each stage moves the dimension-``p`` diagram
    by at most ``eps``, so the total displacement is at most ``log.m * eps``.
    With ``track_distances`` the per-stage distance is measured and stored.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    from .persistence import bottleneck, diagram, reduce

    slog = SimplificationLog(float(eps), int(p))
    cur = K
    prev_dgm = diagram(reduce(cur), cur, p) if track_distances else None
    for _ in range(max_stages):
        chosen = select_compatible(admissible_candidates(cur, p, eps))
        if not chosen:
            break
        nxt, accepted, skipped = contract_compatible(cur, chosen, p, eps)
        stage = Stage([w.edge for w in accepted], accepted, len(cur), len(nxt), skipped)
        if track_distances:
            dgm = diagram(reduce(nxt), nxt, p)
            stage.d_b = bottleneck(prev_dgm, dgm)
            prev_dgm = dgm
        slog.stages.append(stage)
        log.debug("stage %d: %d contractions, %d -> %d simplices", slog.m,
                  len(accepted), len(cur), len(nxt))
        cur = nxt
    return cur, slog


def contraction_sequence(K: FilteredComplex, edges, p: int, eps: float):
    """Contract ``edges`` one at a time, checking (p, eps)-compatibility.

    Returns the list of complexes ``[K, K1, ..., Kn]`` and the windows, or
    raises ``ValueError`` if an edge is not admissible or its window meets
    an earlier one.
    """
    from .contraction import contract

    complexes = [K]
    windows: list[Window] = []
    cur = K
    for e in edges:
        if not is_p_eps_admissible(cur, e, p, eps):
            raise ValueError(f"edge {e!r} is not ({p}, {eps})-admissible")
        w = window(cur, e, p)
        if any(w.overlaps(o) for o in windows):
            raise ValueError(f"window of {e!r} meets an earlier window")
        windows.append(w)
        cur = contract(cur, e).contracted
        complexes.append(cur)
    return complexes, windows
