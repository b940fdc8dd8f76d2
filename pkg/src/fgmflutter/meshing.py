"""Triangulations of rectangular, skewed and centrally-perforated plates.

Meshes are deterministic: structured grids with a fixed diagonal for the
plain rectangle, an affine shear for skew plates, and a ring of radially
graded layers blended into four transfinite blocks around a central
circular cutout.  Boundary nodes carry tags naming the edge they lie on
('edge_x0', 'edge_xa', 'edge_y0', 'edge_yb', 'hole').
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "TriMesh",
    "structured_rect_mesh",
    "apply_skew",
    "cutout_mesh",
    "dof_map",
    "save_mesh",
    "load_mesh",
    "check_conformity",
    "min_quality",
]

EDGE_TAGS = ("edge_x0", "edge_xa", "edge_y0", "edge_yb", "hole")

DOFS_PER_NODE = 5


@dataclass(frozen=True)
class TriMesh:
    """Nodes, CCW triangles, per-node boundary tags and geometry record."""

    nodes: np.ndarray                 # (N, 2)
    triangles: np.ndarray             # (M, 3) int
    node_tags: tuple                  # tuple of frozensets, one per node
    skew_angle: float = 0.0
    geometry: dict = field(default_factory=dict)   # a, b, optional r

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def tagged(self, tag: str) -> np.ndarray:
        """Indices of nodes carrying the given boundary tag."""
        return np.array([i for i, t in enumerate(self.node_tags) if tag in t],
                        dtype=int)

    def areas(self) -> np.ndarray:
        p = self.nodes
        t = self.triangles
        v1 = p[t[:, 1]] - p[t[:, 0]]
        v2 = p[t[:, 2]] - p[t[:, 0]]
        return 0.5 * (v1[:, 0] * v2[:, 1] - v1[:, 1] * v2[:, 0])


def structured_rect_mesh(a: float, b: float, nx: int, ny: int,
                         pattern: str = "ll-ur") -> TriMesh:
    """Uniform grid of (nx+1)(ny+1) nodes, each quad split into two triangles.

    pattern 'll-ur' uses the lower-left to upper-right diagonal everywhere;
    'union-jack' alternates the diagonal with cell parity.
    """
    if a <= 0 or b <= 0:
        raise ValueError("plate dimensions must be positive")
    if nx < 1 or ny < 1:
        raise ValueError("need at least one cell per direction")
    if pattern not in ("ll-ur", "union-jack"):
        raise ValueError(f"unknown split pattern {pattern!r}")

    xs = np.linspace(0.0, a, nx + 1)
    ys = np.linspace(0.0, b, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    def nid(i, j):
        return j * (nx + 1) + i

    tris = []
    for j in range(ny):
        for i in range(nx):
            n00, n10 = nid(i, j), nid(i + 1, j)
            n01, n11 = nid(i, j + 1), nid(i + 1, j + 1)
            if pattern == "ll-ur" or (i + j) % 2 == 0:
                tris.append((n00, n10, n11))
                tris.append((n00, n11, n01))
            else:
                tris.append((n00, n10, n01))
                tris.append((n10, n11, n01))

    tags = []
    for j in range(ny + 1):
        for i in range(nx + 1):
            t = set()
            if i == 0:
                t.add("edge_x0")
            if i == nx:
                t.add("edge_xa")
            if j == 0:
                t.add("edge_y0")
            if j == ny:
                t.add("edge_yb")
            tags.append(frozenset(t))
    return TriMesh(nodes=nodes, triangles=np.array(tris, dtype=int),
                   node_tags=tuple(tags), geometry={"a": a, "b": b})


def apply_skew(mesh: TriMesh, psi: float) -> TriMesh:
    """Shear map (x, y) -> (x + y sin psi, y cos psi).

    Edges y = const stay parallel to the x axis; the former x = const edges
    become oblique at angle psi from the y axis.  Tags are preserved; the
    Jacobian determinant is cos psi, so the area scales accordingly.
    """
    if abs(psi) >= np.pi / 2:
        raise ValueError("skew angle must satisfy |psi| < pi/2")
    if psi == 0.0:
        return mesh
    x = mesh.nodes[:, 0] + mesh.nodes[:, 1] * np.sin(psi)
    y = mesh.nodes[:, 1] * np.cos(psi)
    return replace(mesh, nodes=np.column_stack([x, y]), skew_angle=psi)


def cutout_mesh(a: float, b: float, r: float, refinement: int = 2) -> TriMesh:
    """Rectangle with a central circular hole of radius r.

    The hole is approximated by an inscribed polygon with 16*refinement
    segments.  Radially graded layers connect the polygon to a concentric
    square, and four transfinite blocks fill the space to the outer edges.
    Hole nodes are tagged 'hole' and left free of boundary conditions by
    the assembly stage.
    """
    if a <= 0 or b <= 0:
        raise ValueError("plate dimensions must be positive")
    if not 0.0 < r < min(a, b) / 2.0:
        raise ValueError("cutout radius must satisfy 0 < r < min(a, b)/2")
    if refinement < 1:
        raise ValueError("refinement must be >= 1")

    cx, cy = a / 2.0, b / 2.0
    half = 0.5 * (r + min(a, b) / 2.0)       # half-side of the blending square
    n_side = 4 * refinement
    n_theta = 4 * n_side

    corners = np.array([[cx + half, cy - half], [cx + half, cy + half],
                        [cx - half, cy + half], [cx - half, cy - half]])
    square = []
    for k in range(4):
        p0, p1 = corners[k], corners[(k + 1) % 4]
        for t in np.linspace(0.0, 1.0, n_side + 1)[:-1]:
            square.append((1.0 - t) * p0 + t * p1)
    square = np.array(square)

    ang = np.arctan2(square[:, 1] - cy, square[:, 0] - cx)
    hole = np.column_stack([cx + r * np.cos(ang), cy + r * np.sin(ang)])

    # radial layers, geometrically graded so the first layer matches the
    # hole-polygon segment length
    gaps = np.linalg.norm(square - hole, axis=1)
    arc = 2.0 * np.pi * r / n_theta
    first = float(np.clip(arc / gaps.mean(), 0.05, 0.5))
    growth = 1.5
    n_r = max(2, int(np.ceil(np.log1p((growth - 1.0) / first) / np.log(growth))))
    t_layers = (growth ** np.arange(n_r + 1) - 1.0) / (growth ** n_r - 1.0)

    nodes = []
    lookup = {}

    def add(pt):
        key = (float(pt[0]), float(pt[1]))
        idx = lookup.get(key)
        if idx is None:
            idx = len(nodes)
            lookup[key] = idx
            nodes.append(key)
        return idx

    tris = []

    def add_quad(i00, i10, i11, i01):
        tris.append((i00, i10, i11))
        tris.append((i00, i11, i01))

    ring = np.empty((n_r + 1, n_theta), dtype=int)
    for i, ti in enumerate(t_layers):
        layer = (1.0 - ti) * hole + ti * square
        for k in range(n_theta):
            ring[i, k] = add(layer[k])
    for i in range(n_r):
        for k in range(n_theta):
            k2 = (k + 1) % n_theta
            add_quad(ring[i, k], ring[i, k2], ring[i + 1, k2], ring[i + 1, k])

    rect = np.array([[a, 0.0], [a, b], [0.0, b], [0.0, 0.0]])
    ds = 2.0 * half / n_side
    max_gap = max(np.linalg.norm(corners[k] - rect[k]) for k in range(4))
    n_out = max(1, int(round(max_gap / ds)))
    for k in range(4):
        p0s, p1s = corners[k], corners[(k + 1) % 4]
        p0r, p1r = rect[k], rect[(k + 1) % 4]
        grid = np.empty((n_out + 1, n_side + 1), dtype=int)
        for j, e in enumerate(np.linspace(0.0, 1.0, n_out + 1)):
            for m, x in enumerate(np.linspace(0.0, 1.0, n_side + 1)):
                inner = (1.0 - x) * p0s + x * p1s
                outer = (1.0 - x) * p0r + x * p1r
                grid[j, m] = add((1.0 - e) * inner + e * outer)
        for j in range(n_out):
            for m in range(n_side):
                add_quad(grid[j, m], grid[j, m + 1], grid[j + 1, m + 1], grid[j + 1, m])

    nodes = np.array(nodes)
    tris = np.array(tris, dtype=int)
    v1 = nodes[tris[:, 1]] - nodes[tris[:, 0]]
    v2 = nodes[tris[:, 2]] - nodes[tris[:, 0]]
    neg = (v1[:, 0] * v2[:, 1] - v1[:, 1] * v2[:, 0]) < 0
    tris[neg] = tris[neg][:, ::-1]

    eps = 1e-10 * max(a, b)
    hole_ids = set(ring[0])
    tags = []
    for idx, (x, y) in enumerate(nodes):
        t = set()
        if idx in hole_ids:
            t.add("hole")
        if abs(x) < eps:
            t.add("edge_x0")
        if abs(x - a) < eps:
            t.add("edge_xa")
        if abs(y) < eps:
            t.add("edge_y0")
        if abs(y - b) < eps:
            t.add("edge_yb")
        tags.append(frozenset(t))
    return TriMesh(nodes=nodes, triangles=tris, node_tags=tuple(tags),
                   geometry={"a": a, "b": b, "r": r})


def dof_map(mesh: TriMesh) -> int:
    """Total DOF count; node i, local DOF j maps to global index 5*i + j."""
    return DOFS_PER_NODE * mesh.n_nodes


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def check_conformity(mesh: TriMesh) -> None:
    """Raise if any triangle is inverted or any edge is shared incorrectly.

    Interior edges must appear in exactly two triangles with opposite
    orientation, boundary edges in exactly one.
    """
    areas = mesh.areas()
    if np.any(areas <= 0):
        raise ValueError(f"{int(np.sum(areas <= 0))} non-positive triangle areas")
    edges = {}
    for tri in mesh.triangles:
        for i in range(3):
            e = (int(tri[i]), int(tri[(i + 1) % 3]))
            key = (min(e), max(e))
            edges.setdefault(key, []).append(e)
    for key, occ in edges.items():
        if len(occ) > 2:
            raise ValueError(f"edge {key} shared by {len(occ)} triangles")
        if len(occ) == 2 and occ[0] == occ[1]:
            raise ValueError(f"edge {key} traversed twice in the same direction")


def min_quality(mesh: TriMesh) -> float:
    """Smallest inradius/circumradius ratio over the mesh (0.5 = equilateral)."""
    p = mesh.nodes
    t = mesh.triangles
    ea = np.linalg.norm(p[t[:, 1]] - p[t[:, 2]], axis=1)
    eb = np.linalg.norm(p[t[:, 2]] - p[t[:, 0]], axis=1)
    ec = np.linalg.norm(p[t[:, 0]] - p[t[:, 1]], axis=1)
    s = 0.5 * (ea + eb + ec)
    area = np.sqrt(np.maximum(s * (s - ea) * (s - eb) * (s - ec), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (area / s) / (ea * eb * ec / (4.0 * area))
    return float(np.nanmin(ratio))


# ---------------------------------------------------------------------------
# plain-text mesh files
# ---------------------------------------------------------------------------

def save_mesh(mesh: TriMesh, path) -> None:
    """Write the documented plain-text format.

    Header line: n_nodes n_triangles a b r psi.  Node lines: id x y tags
    (comma separated, '-' if none).  Triangle lines: id n1 n2 n3.
    """
    g = mesh.geometry
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{mesh.n_nodes} {len(mesh.triangles)} "
                 f"{float(g.get('a', 0.0))!r} {float(g.get('b', 0.0))!r} "
                 f"{float(g.get('r', 0.0))!r} {float(mesh.skew_angle)!r}\n")
        for i, (x, y) in enumerate(mesh.nodes):
            tags = ",".join(sorted(mesh.node_tags[i])) or "-"
            fh.write(f"{i} {float(x)!r} {float(y)!r} {tags}\n")
        for i, tri in enumerate(mesh.triangles):
            fh.write(f"{i} {tri[0]} {tri[1]} {tri[2]}\n")


def load_mesh(path) -> TriMesh:
    """Read a mesh written by save_mesh and validate its conformity."""
    with open(path, encoding="utf-8") as fh:
        head = fh.readline().split()
        n_nodes, n_tris = int(head[0]), int(head[1])
        a, b, r, psi = (float(v) for v in head[2:6])
        nodes = np.empty((n_nodes, 2))
        tags = []
        for _ in range(n_nodes):
            parts = fh.readline().split()
            i = int(parts[0])
            nodes[i] = (float(parts[1]), float(parts[2]))
            tags.append(frozenset() if parts[3] == "-"
                        else frozenset(parts[3].split(",")))
        tris = np.empty((n_tris, 3), dtype=int)
        for _ in range(n_tris):
            parts = fh.readline().split()
            tris[int(parts[0])] = [int(p) for p in parts[1:4]]
    geometry = {"a": a, "b": b}
    if r > 0:
        geometry["r"] = r
    mesh = TriMesh(nodes=nodes, triangles=tris, node_tags=tuple(tags),
                   skew_angle=psi, geometry=geometry)
    check_conformity(mesh)
    return mesh
