"""Randomized property checks on generated complexes.

Each suite takes a seed, runs one case and returns the number of individual
checks performed; any failed check raises :class:`InvariantViolation`.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import generators as gen
from .contraction import Chain, boundary, contract, link_condition, xi_chain
from .errors import InvariantViolation
from .pairing2m import compute_pairing, is_admissible
from .persistence import bottleneck, boundary_basis, cycle_basis, diagram, reduce
from .stability import admissibility_gap, link_condition_local, psi_chain


def random_surface(rng: np.random.Generator):
    if rng.random() < 0.5:
        tops = gen.sphere_triangles(int(rng.integers(5, 60)), rng)
    else:
        tops = gen.torus_triangles(int(rng.integers(3, 7)), int(rng.integers(3, 7)), rng)
    return gen.random_lower_star(tops, rng)


def random_general(rng: np.random.Generator):
    dim = 2 if rng.random() < 0.7 else 3
    tops = gen.delaunay_complex(int(rng.integers(8, 25)), dim, rng, keep=0.75)
    return gen.random_filtration(tops, rng)


def random_combination(basis: list[Chain], rng, dim: int) -> Chain:
    acc: frozenset = frozenset()
    for c in basis:
        if rng.random() < 0.5:
            acc = acc ^ c.simplices
    return Chain(dim, acc)


def _fail(msg):
    raise InvariantViolation(msg)


def suite_oracle(seed: int) -> int:
    rng = np.random.default_rng(seed)
    K = random_surface(rng)
    if compute_pairing(K) != reduce(K):
        _fail(f"seed {seed}: spanning-tree pairing differs from reduction")
    return 1


def suite_preservation(seed: int) -> int:
    rng = np.random.default_rng(seed)
    K = random_surface(rng)
    P = compute_pairing(K)
    n = 0
    for eid in K.of_dim(1).tolist():
        if not link_condition(K, eid) or not is_admissible(K, eid, P):
            continue
        rec = contract(K, eid)
        expect = {(int(rec.image[a]), int(rec.image[b])) for a, b in P.pairs
                  if rec.image[a] != rec.image[b]}
        if compute_pairing(rec.contracted).pair_set() != expect:
            _fail(f"seed {seed}: pairing not preserved by contracting {K.simplices[eid]}")
        n += 1
    return n


def suite_stability(seed: int) -> int:
    rng = np.random.default_rng(seed)
    K = random_general(rng)
    n = 0
    for eid in rng.permutation(K.of_dim(1)).tolist()[:6]:
        u, v = K.simplices[eid]
        if not link_condition_local(K, u, v):
            continue
        p = int(rng.integers(0, 2))
        gap = admissibility_gap(K, eid, p)
        eps = float(rng.uniform(0.1, 5.0))
        if gap > eps:
            continue
        Kp = contract(K, eid).contracted
        d = bottleneck(diagram(reduce(K), K, p), diagram(reduce(Kp), Kp, p))
        if d > eps + 1e-9:
            _fail(f"seed {seed}: d_b {d} exceeds eps {eps} for edge {K.simplices[eid]}")
        n += 1
    return n


def suite_chain_maps(seed: int) -> int:
    rng = np.random.default_rng(seed)
    K = random_general(rng)
    n = 0
    for eid in rng.permutation(K.of_dim(1)).tolist()[:3]:
        if not link_condition(K, eid):
            continue
        rec = contract(K, eid)
        Kp = rec.contracted
        for p in (1, 2):
            if p > K.dim:
                continue
            z = random_combination(cycle_basis(K, p), rng, p)
            if boundary(Kp, xi_chain(rec, z)):
                _fail(f"seed {seed}: xi image of a cycle is not a cycle")
            gamma = Chain(p + 1, frozenset(int(t) for t in K.of_dim(p + 1) if rng.random() < 0.3))
            if xi_chain(rec, boundary(K, gamma)) != boundary(Kp, xi_chain(rec, gamma)):
                _fail(f"seed {seed}: xi does not commute with the boundary")
            zp = random_combination(cycle_basis(Kp, p), rng, p)
            if boundary(K, psi_chain(rec, zp, p)):
                _fail(f"seed {seed}: psi image of a cycle is not a cycle")
            bp = random_combination(boundary_basis(Kp, p), rng, p)
            if boundary(K, psi_chain(rec, bp, p)):
                _fail(f"seed {seed}: psi image of a boundary is not a cycle")
            n += 4
    return n


SUITES = {
    "oracle-equivalence": suite_oracle,
    "pairing-preservation": suite_preservation,
    "single-contraction-stability": suite_stability,
    "chain-maps": suite_chain_maps,
}


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CONTRACTA_THREADS", "1")))
    except ValueError:
        return 1


def _run_case(args):
    name, seed = args
    try:
        return name, seed, SUITES[name](seed), None
    except InvariantViolation as exc:
        return name, seed, 0, str(exc)


def run_all(seed: int, cases: int, workers: int | None = None):
    """Run every suite on ``cases`` seeds; yields ``(name, checks, failures)``."""
    workers = worker_count() if workers is None else workers
    jobs = [(name, seed * 100003 + i) for name in SUITES for i in range(cases)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_case, jobs))
    else:
        results = [_run_case(j) for j in jobs]
    for name in SUITES:
        rows = [r for r in results if r[0] == name]
        yield name, sum(r[2] for r in rows), [r[3] for r in rows if r[3]]


