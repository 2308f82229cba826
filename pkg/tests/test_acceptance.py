"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with its measured
numbers and asserts both the property and the time budget.
"""
import math
import time

import numpy as np

from conftest import brute_bottleneck
from contracta import generators as gen
from contracta.cli import main as cli_main
from contracta.contraction import Chain, boundary, contract, link_condition, xi_chain
from contracta.io import RunReport, load_diagram
from contracta.pairing2m import compute_pairing, is_admissible
from contracta.persistence import (
    PersistenceDiagram,
    bottleneck,
    boundary_basis,
    cycle_basis,
    diagram,
    homologous,
    reduce,
)
from contracta.stability import (
    admissibility_gap,
    admissible_candidates,
    link_condition_local,
    psi_chain,
)

TOL = 1e-9


def _line(n, ok, detail):
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


def _surface(rng, max_simplices=500):
    while True:
        if rng.random() < 0.5:
            tops = gen.sphere_triangles(int(rng.integers(6, 80)), rng)
        else:
            tops = gen.torus_triangles(int(rng.integers(3, 10)), int(rng.integers(3, 10)), rng)
        K = gen.random_lower_star(tops, rng, distinct=True)
        if len(K) <= max_simplices:
            return K


def _general(rng, dim=None):
    dim = dim or (2 if rng.random() < 0.6 else 3)
    n = int(rng.integers(10, 30)) if dim == 2 else int(rng.integers(8, 16))
    tops = gen.delaunay_complex(n, dim, rng, keep=0.8)
    return gen.random_filtration(tops, rng, scale=1.0, jump=0.6)


def _random_combination(basis, rng, dim):
    acc = frozenset()
    while not acc and basis:
        for c in basis:
            if rng.random() < 0.5:
                acc = acc ^ c.simplices
    return Chain(dim, acc)


def _contractible_edges(K):
    out = []
    for eid in K.of_dim(1).tolist():
        u, v = K.simplices[eid]
        if K.id_of((u,)) > K.id_of((v,)):
            u, v = v, u
        if link_condition_local(K, u, v):
            out.append(eid)
    return out


def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    n, bad = 0, 0
    while n < 120:
        K = _surface(rng)
        bad += compute_pairing(K) != reduce(K)
        n += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt <= 60
    _line(1, ok, f"{n} surfaces, {bad} mismatches, {dt:.1f}s")
    assert ok


def test_criterion_2_pairing_preservation():
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    manifolds = edges = bad = 0
    while manifolds < 60:
        K = _surface(rng)
        P = compute_pairing(K)
        manifolds += 1
        for eid in K.of_dim(1).tolist():
            if not link_condition(K, eid) or not is_admissible(K, eid, P):
                continue
            rec = contract(K, eid)
            expect = {(int(rec.image[a]), int(rec.image[b])) for a, b in P.pairs
                      if rec.image[a] != rec.image[b]}
            Kp = rec.contracted
            bad += reduce(Kp).pair_set() != expect
            bad += compute_pairing(Kp).pair_set() != expect
            edges += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and edges > 0 and dt <= 120
    _line(2, ok, f"{manifolds} manifolds, {edges} admissible edges, {bad} mismatches, {dt:.1f}s")
    assert ok


def test_criterion_3_single_contraction_stability():
    rng = np.random.default_rng(303)
    t0 = time.perf_counter()
    n = bad = nonzero_gap = 0
    worst = 0.0
    while n < 240:
        K = _general(rng)
        p = int(rng.integers(0, 2))
        eps = float(rng.uniform(0.1, 5.0))
        edges = [e for e in _contractible_edges(K) if admissibility_gap(K, e, p) <= eps]
        if not edges:
            continue
        D = diagram(reduce(K), K, p)
        for eid in rng.permutation(edges)[:4].tolist():
            Kp = contract(K, eid).contracted
            d = bottleneck(D, diagram(reduce(Kp), Kp, p))
            bad += d > eps + TOL
            nonzero_gap += admissibility_gap(K, eid, p) > 0
            worst = max(worst, d / eps)
            n += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt <= 120
    _line(3, ok, f"{n} contractions ({nonzero_gap} with nonzero gap), {bad} violations, "
                 f"max d_b/eps {worst:.3f}, {dt:.1f}s")
    assert ok


def _compatible_sequence(K, p, eps, rng, max_len=6):
    """Contract random admissible edges whose windows avoid all earlier ones."""
    cur, windows, steps = K, [], 0
    while steps < max_len:
        cands = [w for w in admissible_candidates(cur, p, eps)
                 if not any(w.overlaps(o) for o in windows)]
        if not cands:
            break
        w = cands[int(rng.integers(len(cands)))]
        windows.append(w)
        cur = contract(cur, w.edge).contracted
        steps += 1
    return cur, steps


def test_criterion_4_compatible_sequence_stability():
    rng = np.random.default_rng(404)
    t0 = time.perf_counter()
    seqs = bad = 0
    lengths = []
    worst = 0.0
    while seqs < 60:
        K = _general(rng, dim=2)
        p = int(rng.integers(0, 2))
        eps = float(rng.uniform(0.1, 5.0))
        Kn, steps = _compatible_sequence(K, p, eps, rng)
        if steps < 3:
            continue
        d = bottleneck(diagram(reduce(K), K, p), diagram(reduce(Kn), Kn, p))
        bad += d > eps + TOL
        worst = max(worst, d / eps)
        lengths.append(steps)
        seqs += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt <= 120
    _line(4, ok, f"{seqs} sequences (length {min(lengths)}-{max(lengths)}), {bad} violations, "
                 f"max d_b/eps {worst:.3f}, {dt:.1f}s")
    assert ok


def _chain_cases(rng):
    """Yield ``(record, p, eps, level)`` for random contractions; eps is the p-gap."""
    while True:
        K = _general(rng)
        edges = _contractible_edges(K)
        if not edges:
            continue
        eid = int(rng.choice(edges))
        rec = contract(K, eid)
        Kp = rec.contracted
        p = int(rng.integers(0, min(K.dim, 2) + 1))
        eps = admissibility_gap(K, eid, p)
        level = float(rng.choice(Kp.heights))
        yield rec, p, eps, level


def test_criterion_5_chain_map_properties():
    rng = np.random.default_rng(505)
    t0 = time.perf_counter()
    counts = {"xi cycle": 0, "xi boundary": 0, "psi cycle": 0, "psi boundary": 0}
    bad = 0
    for rec, p, eps, a in _chain_cases(rng):
        if min(counts.values()) >= 550:
            break
        K, Kp = rec.source, rec.contracted
        z = _random_combination(cycle_basis(K, p, a), rng, p)
        if z:
            x = xi_chain(rec, z)
            bad += p > 0 and bool(boundary(Kp, x))
            bad += any(Kp.heights[s] > a for s in x.simplices)
            counts["xi cycle"] += 1
        b = _random_combination(boundary_basis(K, p, a), rng, p)
        if b:
            bad += not homologous(Kp, a, xi_chain(rec, b), Chain(p))
            counts["xi boundary"] += 1
        zp = _random_combination(cycle_basis(Kp, p, a), rng, p)
        if zp:
            y = psi_chain(rec, zp, p)
            bad += p > 0 and bool(boundary(K, y))
            bad += any(K.heights[s] > a + eps + TOL for s in y.simplices)
            counts["psi cycle"] += 1
        bp = _random_combination(boundary_basis(Kp, p, a), rng, p)
        if bp:
            y = psi_chain(rec, bp, p)
            bad += not homologous(K, a + eps + TOL, y, Chain(p))
            counts["psi boundary"] += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt <= 60
    _line(5, ok, f"{counts}, {bad} violations, {dt:.1f}s")
    assert ok


def test_criterion_6_commutation():
    rng = np.random.default_rng(606)
    t0 = time.perf_counter()
    n = bad = nontrivial = 0
    for rec, p, eps, a in _chain_cases(rng):
        if n >= 150:
            break
        K = rec.source
        z = _random_combination(cycle_basis(K, p, a), rng, p)
        if not z:
            continue
        back = psi_chain(rec, xi_chain(rec, z), p)
        bad += not homologous(K, a + eps + TOL, back, z)
        nontrivial += back != z
        n += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt <= 120
    _line(6, ok, f"{n} cycles ({nontrivial} changed by the round trip), {bad} failures, {dt:.1f}s")
    assert ok


def test_criterion_7_staged_simplification():
    from contracta.stability import simplify
    t0 = time.perf_counter()
    K = gen.generate_terrain(50, seed=7, roughness=1.0)
    Kf, log = simplify(K, 1, 0.5)
    d = bottleneck(diagram(reduce(K), K, 1), diagram(reduce(Kf), Kf, 1))
    bound = log.m * 0.5
    dt = time.perf_counter() - t0
    ok = d <= bound + TOL and dt <= 300
    _line(7, ok, f"{len(K)} -> {len(Kf)} simplices, m = {log.m}, d_b = {d:.4f}, "
                 f"bound = {bound}, slack = {bound - d:.4f} ({d / bound:.2e} of bound), {dt:.1f}s")
    assert ok


def test_criterion_8_bottleneck_brute_force():
    rng = np.random.default_rng(808)
    t0 = time.perf_counter()
    n = bad = 0
    while n < 300:
        total = int(rng.integers(0, 7))
        k = int(rng.integers(0, total + 1))
        integer = rng.random() < 0.5

        def pts(m):
            out = []
            for _ in range(m):
                b = float(rng.integers(0, 6)) if integer else float(rng.normal())
                life = float(rng.integers(0, 5)) if integer else float(rng.exponential())
                out.append((b, math.inf if rng.random() < 0.15 else b + life, 0))
            return PersistenceDiagram(out)

        D1, D2 = pts(k), pts(total - k)
        bad += bottleneck(D1, D2) != brute_bottleneck(D1, D2)
        n += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt <= 30
    _line(8, ok, f"{n} cases, {bad} disagreements, {dt:.1f}s")
    assert ok


def test_criterion_9_cli_end_to_end(tmp_path):
    terrain = tmp_path / "terrain.off"
    assert cli_main(["terrain", "--n", "50", "--seed", "7", "--out", str(terrain)]) == 0
    out, rep, dg = tmp_path / "simplified.off", tmp_path / "report.json", tmp_path / "dgms"
    code = cli_main(["simplify", "--input", str(terrain), "--dim", "1", "--epsilon", "0.5",
                     "--max-stages", "1000", "--out", str(out), "--report", str(rep),
                     "--diagrams-out", str(dg)])
    files = [out, rep, dg / "before.dgm", dg / "after.dgm", dg / "before.svg", dg / "after.svg"]
    report = RunReport.load(rep)
    recomputed = bottleneck(load_diagram(dg / "before.dgm"), load_diagram(dg / "after.dgm"), dim=1)
    ok = (code == 0 and all(f.exists() for f in files)
          and abs(report.d_b - recomputed) <= 1e-12)
    _line(9, ok, f"exit {code}, report d_b {report.d_b!r}, recomputed {recomputed!r}")
    assert ok
