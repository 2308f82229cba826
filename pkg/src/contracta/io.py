"""Mesh, diagram and report files.

Meshes are OFF or OBJ triangle meshes. Diagrams use a plain text format
with one point per line, ``dim birth death``, and the literal ``inf`` for
essential classes; floats are written so they read back bit-identically.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import FilteredComplex, closed_skeleton, lower_star_extend
from .errors import NonTriangleFace, ParseError, UnknownVertexInHeightFile
from .persistence import PersistenceDiagram

# -- meshes -------------------------------------------------------------------


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_off(path) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    lines = list(_data_lines(Path(path).read_text()))
    if not lines or not lines[0][1].startswith("OFF"):
        raise ParseError(f"{path}: missing OFF header")
    head = lines[0][1][3:].split()
    rest = lines[1:]
    if not head:
        if not rest:
            raise ParseError(f"{path}: missing counts line")
        head = rest[0][1].split()
        rest = rest[1:]
    try:
        nv, nf = int(head[0]), int(head[1])
    except (IndexError, ValueError):
        raise ParseError(f"{path}: bad counts line") from None
    if len(rest) < nv + nf:
        raise ParseError(f"{path}: expected {nv} vertices and {nf} faces")
    try:
        verts = np.array([[float(x) for x in line.split()[:3]] for _, line in rest[:nv]],
                         dtype=np.float64).reshape(nv, 3)
    except ValueError:
        raise ParseError(f"{path}: bad vertex line") from None
    faces = []
    for lineno, line in rest[nv:nv + nf]:
        try:
            tok = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad face line") from None
        if not tok or tok[0] != 3 or len(tok) < 4:
            raise NonTriangleFace(f"{path}:{lineno}: face with {tok[0] if tok else 0} vertices")
        face = tuple(tok[1:4])
        if any(not 0 <= i < nv for i in face):
            raise ParseError(f"{path}:{lineno}: face index out of range")
        faces.append(face)
    return verts, faces


def read_obj(path) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    verts, faces = [], []
    for lineno, line in _data_lines(Path(path).read_text()):
        tok = line.split()
        if tok[0] == "v":
            try:
                verts.append([float(x) for x in tok[1:4]])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad vertex line") from None
        elif tok[0] == "f":
            if len(tok) != 4:
                raise NonTriangleFace(f"{path}:{lineno}: face with {len(tok) - 1} vertices")
            face = []
            for t in tok[1:]:
                try:
                    i = int(t.split("/")[0])
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: bad face index") from None
                i = i - 1 if i > 0 else len(verts) + i
                if not 0 <= i < len(verts):
                    raise ParseError(f"{path}:{lineno}: face index out of range")
                face.append(i)
            faces.append(tuple(face))
    return np.array(verts, dtype=np.float64).reshape(-1, 3), faces


def read_mesh(path):
    suffix = Path(path).suffix.lower()
    if suffix == ".off":
        return read_off(path)
    if suffix == ".obj":
        return read_obj(path)
    raise ParseError(f"{path}: unsupported mesh format {suffix!r}")


def angle_deficit(verts: np.ndarray, faces) -> np.ndarray:
    """Discrete Gaussian curvature per vertex.

    ``2*pi`` minus the incident corner angles at interior vertices, ``pi``
    minus them at boundary vertices.
    """
    total = np.zeros(len(verts))
    edge_count: dict = {}
    for f in faces:
        for k in range(3):
            a, b, c = f[k], f[(k + 1) % 3], f[(k + 2) % 3]
            e1, e2 = verts[b] - verts[a], verts[c] - verts[a]
            denom = np.linalg.norm(e1) * np.linalg.norm(e2)
            if denom > 0:
                total[a] += math.acos(float(np.clip(np.dot(e1, e2) / denom, -1.0, 1.0)))
            key = (min(a, b), max(a, b))
            edge_count[key] = edge_count.get(key, 0) + 1
    full = np.full(len(verts), 2 * math.pi)
    for (a, b), n in edge_count.items():
        if n == 1:
            full[a] = full[b] = math.pi
    return full - total


def read_height_file(path, n_vertices: int) -> np.ndarray:
    vals = np.full(n_vertices, np.nan)
    for lineno, line in _data_lines(Path(path).read_text()):
        tok = line.split()
        try:
            i, h = int(tok[0]), float(tok[1])
        except (IndexError, ValueError):
            raise ParseError(f"{path}:{lineno}: expected 'index value'") from None
        if not 0 <= i < n_vertices:
            raise UnknownVertexInHeightFile(f"{path}:{lineno}: no vertex {i}")
        vals[i] = h
    missing = np.flatnonzero(np.isnan(vals))
    if len(missing):
        raise ParseError(f"{path}: no height for vertex {int(missing[0])}")
    return vals


def mesh_to_complex(verts: np.ndarray, faces, heights) -> FilteredComplex:
    coords = {i: tuple(float(x) for x in verts[i]) for i in range(len(verts))}
    skel = closed_skeleton(faces) + [(i,) for i in range(len(verts))]
    skel = sorted(set(skel), key=lambda s: (len(s), s))
    return lower_star_extend({i: float(heights[i]) for i in range(len(verts))}, skel,
                             coords=coords)


def load_mesh(path, height_source: str = "z") -> FilteredComplex:
    """Load a triangle mesh as a lower-star filtered complex.

    ``height_source`` is ``"z"``, ``"curvature"`` (angle deficit) or the
    path of a sidecar file of ``index value`` lines.
    """
    verts, faces = read_mesh(path)
    if height_source == "z":
        heights = verts[:, 2]
    elif height_source == "curvature":
        heights = angle_deficit(verts, faces)
    else:
        heights = read_height_file(height_source, len(verts))
    return mesh_to_complex(verts, faces, heights)


def _mesh_arrays(K: FilteredComplex):
    verts = sorted(K.vertices())
    renum = {x: i for i, x in enumerate(verts)}
    if K.coords is not None:
        xyz = [K.coords[x] for x in verts]
    else:
        xyz = [(0.0, 0.0, K.height(K.id_of((x,)))) for x in verts]
    faces = [tuple(renum[x] for x in K.simplices[t]) for t in K.of_dim(2)]
    return xyz, faces


def save_mesh(K: FilteredComplex, path) -> None:
    """Write the vertices and triangles of ``K`` as OFF or OBJ."""
    xyz, faces = _mesh_arrays(K)
    suffix = Path(path).suffix.lower()
    out = []
    if suffix == ".off":
        out.append("OFF")
        out.append(f"{len(xyz)} {len(faces)} 0")
        out += [" ".join(repr(float(c)) for c in p) for p in xyz]
        out += ["3 " + " ".join(str(i) for i in f) for f in faces]
    elif suffix == ".obj":
        out += ["v " + " ".join(repr(float(c)) for c in p) for p in xyz]
        out += ["f " + " ".join(str(i + 1) for i in f) for f in faces]
    else:
        raise ParseError(f"{path}: unsupported mesh format {suffix!r}")
    Path(path).write_text("\n".join(out) + "\n")


# -- diagrams -------------------------------------------------------------------


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def format_diagram(D: PersistenceDiagram) -> str:
    return "".join(f"{p} {_fmt(b)} {_fmt(d)}\n" for b, d, p in D.points)


def save_diagram(D: PersistenceDiagram, path) -> None:
    Path(path).write_text(format_diagram(D))


def parse_diagram(text: str, source: str = "<diagram>") -> PersistenceDiagram:
    pts = []
    for lineno, line in _data_lines(text):
        tok = line.split()
        if len(tok) != 3:
            raise ParseError(f"{source}:{lineno}: expected 'dim birth death'")
        try:
            p, b, d = int(tok[0]), float(tok[1]), float(tok[2])
        except ValueError:
            raise ParseError(f"{source}:{lineno}: bad number") from None
        if p < 0 or math.isnan(b) or math.isnan(d) or d < b or math.isinf(b):
            raise ParseError(f"{source}:{lineno}: invalid point")
        pts.append((b, d, p))
    return PersistenceDiagram(pts)


def load_diagram(path) -> PersistenceDiagram:
    return parse_diagram(Path(path).read_text(), str(path))


_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]


def emit_diagram_svg(D: PersistenceDiagram, path, size: int = 400, title: str = "") -> None:
    """Scatter plot of the diagram above a dashed diagonal."""
    pad = 40
    fin = np.concatenate([D.births, D.deaths[np.isfinite(D.deaths)]])
    lo = float(fin.min()) if len(fin) else 0.0
    hi = float(fin.max()) if len(fin) else 1.0
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    inf_row = pad * 0.5
    plot = size - 2 * pad

    def sx(x):
        return pad + (x - lo) / span * plot

    def sy(y):
        return inf_row if math.isinf(y) else size - pad - (y - lo) / span * plot

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{sx(lo):.2f}" y1="{sy(lo):.2f}" x2="{sx(hi):.2f}" y2="{sy(hi):.2f}" '
        'stroke="gray" stroke-dasharray="4,3"/>',
        f'<line x1="{pad}" y1="{inf_row:.2f}" x2="{size - pad}" y2="{inf_row:.2f}" '
        'stroke="#ccc"/>',
        f'<text x="{size - pad + 4}" y="{inf_row + 4:.2f}" font-size="10">inf</text>',
        f'<text x="{pad}" y="{size - 10}" font-size="11">birth [{lo:.3g}, {hi:.3g}]</text>',
    ]
    if title:
        parts.append(f'<text x="{size / 2:.0f}" y="14" font-size="12" '
                     f'text-anchor="middle">{title}</text>')
    for b, d, p in D.points:
        parts.append(f'<circle cx="{sx(b):.2f}" cy="{sy(d):.2f}" r="3" '
                     f'fill="{_COLORS[p % len(_COLORS)]}" fill-opacity="0.7"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


# -- reports --------------------------------------------------------------------


@dataclass
class RunReport:
    """One row of a simplification results table."""

    dataset: str
    init_simplices: int
    contractions: int
    iterations: int
    remaining_simplices: int
    pct_reduction: float
    d_b: float
    epsilon: float
    p: int
    height_source: str = "z"
    comparable_to_published: bool = True
    seed: int | None = None
    stages: list = field(default_factory=list)

    @classmethod
    def from_run(cls, dataset, init_simplices, remaining, log, d_b, **extra):
        pct = 100.0 * (1.0 - remaining / init_simplices) if init_simplices else 0.0
        return cls(dataset=dataset, init_simplices=int(init_simplices),
                   contractions=log.contractions, iterations=log.m,
                   remaining_simplices=int(remaining), pct_reduction=round(pct, 2),
                   d_b=float(d_b), epsilon=float(log.epsilon), p=int(log.p),
                   stages=[{"contractions": len(s.contracted_edges),
                            "simplices_before": s.simplices_before,
                            "simplices_after": s.simplices_after,
                            "skipped": s.skipped} for s in log.stages],
                   **extra)

    def to_json(self) -> str:
        d = asdict(self)
        if math.isinf(d["d_b"]):
            d["d_b"] = "inf"
        return json.dumps(d, indent=2)

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "RunReport":
        d = json.loads(Path(path).read_text())
        if d.get("d_b") == "inf":
            d["d_b"] = math.inf
        return cls(**d)
