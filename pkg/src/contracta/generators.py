"""Seeded synthetic complexes: terrains, closed surfaces, random filtrations."""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, Delaunay

from .core import FilteredComplex, build_complex, closed_skeleton, lower_star_extend


def _value_noise(n: int, rng: np.random.Generator, roughness: float) -> np.ndarray:
    xs = np.linspace(0.0, 1.0, n)
    total = np.zeros((n, n))
    amp = 1.0
    octaves = max(1, int(np.ceil(np.log2(max(n, 2)))))
    for k in range(octaves):
        cells = 2 ** (k + 1)
        lattice = rng.random((cells + 1, cells + 1))
        g = xs * cells
        i0 = np.minimum(np.floor(g).astype(int), cells - 1)
        t = g - i0
        t = t * t * (3.0 - 2.0 * t)
        rows = lattice[i0] * (1 - t)[:, None] + lattice[i0 + 1] * t[:, None]
        layer = rows[:, i0] * (1 - t)[None, :] + rows[:, i0 + 1] * t[None, :]
        total += amp * layer
        amp *= 0.5 * roughness
    return total


def terrain_heights(n: int, seed: int = 0, roughness: float = 1.0,
                    scale: float = 100.0) -> np.ndarray:
    """``n x n`` grid of value-noise heights rescaled to ``[0, scale]``."""
    rng = np.random.default_rng(seed)
    z = _value_noise(n, rng, roughness)
    z -= z.min()
    top = z.max()
    return z * (scale / top) if top > 0 else z


def grid_triangles(n: int) -> list[tuple[int, int, int]]:
    tris = []
    for i in range(n - 1):
        for j in range(n - 1):
            a, b, c, d = i * n + j, i * n + j + 1, (i + 1) * n + j, (i + 1) * n + j + 1
            tris.append((a, b, d))
            tris.append((a, c, d))
    return tris


def generate_terrain(n: int, seed: int = 0, roughness: float = 1.0,
                     scale: float = 100.0) -> FilteredComplex:
    """Triangulated ``n x n`` height field with lower-star heights.

    Vertex ``i * n + j`` sits at ``(j, i, z)``; every grid cell is split
    along its main diagonal. Deterministic in ``(n, seed, roughness)``.
    """
    if n < 2:
        raise ValueError("terrain needs n >= 2")
    z = terrain_heights(n, seed, roughness, scale).ravel()
    coords = {i * n + j: (float(j), float(i), float(z[i * n + j]))
              for i in range(n) for j in range(n)}
    heights = {v: float(z[v]) for v in range(n * n)}
    return lower_star_extend(heights, closed_skeleton(grid_triangles(n)), coords=coords)


def sphere_triangles(n_vertices: int, rng: np.random.Generator) -> list[tuple]:
    pts = rng.normal(size=(n_vertices, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return [tuple(int(x) for x in t) for t in ConvexHull(pts).simplices]


def torus_triangles(m: int, n: int, rng: np.random.Generator | None = None) -> list[tuple]:
    """Grid torus with ``m x n`` vertices (``m, n >= 3``), random diagonals."""
    if m < 3 or n < 3:
        raise ValueError("torus grid needs at least 3 x 3 vertices")
    tris = []
    for i in range(m):
        for j in range(n):
            a = i * n + j
            b = i * n + (j + 1) % n
            c = ((i + 1) % m) * n + j
            d = ((i + 1) % m) * n + (j + 1) % n
            if rng is not None and rng.random() < 0.5:
                tris += [(a, b, c), (b, c, d)]
            else:
                tris += [(a, b, d), (a, c, d)]
    return tris


def delaunay_complex(n_points: int, dim: int, rng: np.random.Generator,
                     keep: float = 0.8) -> list[tuple]:
    """Closure of a random subset of a Delaunay triangulation's top simplices."""
    pts = rng.random((n_points, dim))
    tops = [tuple(int(x) for x in s) for s in Delaunay(pts).simplices]
    chosen = [t for t in tops if rng.random() < keep] or tops[:1]
    return closed_skeleton(chosen)


def random_lower_star(tops, rng: np.random.Generator, distinct: bool = True) -> FilteredComplex:
    skel = closed_skeleton(tops)
    verts = sorted({s[0] for s in skel if len(s) == 1})
    if distinct:
        vals = rng.permutation(len(verts)).astype(float)
    else:
        vals = rng.integers(0, max(2, len(verts) // 3), size=len(verts)).astype(float)
    return lower_star_extend(dict(zip(verts, vals)), skel)


def random_filtration(tops, rng: np.random.Generator, scale: float = 1.0,
                      jump: float = 0.5) -> FilteredComplex:
    """Face-monotone heights that are not lower-star.

    Each simplex gets the maximum of its facet heights plus, with
    probability ``jump``, an exponential increment of mean ``scale``.
    """
    skel = closed_skeleton(tops)
    h: dict = {}
    for s in skel:
        if len(s) == 1:
            h[s] = float(rng.random() * 4 * scale)
            continue
        base = max(h[s[:i] + s[i + 1:]] for i in range(len(s)))
        h[s] = base + (float(rng.exponential(scale)) if rng.random() < jump else 0.0)
    return build_complex(h.items())
