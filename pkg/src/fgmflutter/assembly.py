"""Global assembly, skew-edge DOF frames and boundary-condition reduction.

Element matrices are scattered into sparse global matrices; for skew plates
the DOFs of nodes on the oblique edges are rotated into edge-local frames
before constraints are applied; constraints are enforced by deleting rows
and columns, keeping the reduced operators well conditioned for the
eigenvalue sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .element import (ElementGeometry, cs_smooth, element_aero,
                      element_aero_damping, element_geometric_stiffness,
                      element_mass, element_stiffness)
from .materials import FGMSection, SectionProperties, section_properties
from .meshing import DOFS_PER_NODE, TriMesh

__all__ = [
    "GlobalSystem",
    "assemble",
    "build_system",
    "apply_skew_transform",
    "apply_bc",
    "dump_system",
]

# constrained local DOF indices per edge family and boundary condition
_BC_SETS = {
    "SSSS": {"x": (0, 2, 4), "y": (1, 2, 3)},          # u,w,ty | v,w,tx
    "CCCC": {"x": (0, 1, 2, 3, 4), "y": (0, 1, 2, 3, 4)},
}


@dataclass(frozen=True)
class GlobalSystem:
    """Assembled (optionally reduced) operators of one plate configuration.

    K, KG, M, A, DA are sparse CSR of equal square size; `free` maps the
    retained rows/columns back to global DOF indices (arange before
    reduction); `skew_nodes` lists nodes whose DOFs live in edge-local
    frames.
    """

    K: sp.csr_matrix
    KG: sp.csr_matrix
    M: sp.csr_matrix
    A: sp.csr_matrix
    DA: sp.csr_matrix
    free: np.ndarray
    skew_angle: float = 0.0
    skew_nodes: tuple = ()

    @property
    def n_dof(self) -> int:
        return self.K.shape[0]

    def matrices(self):
        return {"K": self.K, "KG": self.KG, "M": self.M,
                "A": self.A, "DA": self.DA}


def assemble(mesh: TriMesh, element_matrices) -> GlobalSystem:
    """Scatter-add per-element 15x15 matrices into global sparse operators.

    element_matrices(coords) must return the dict of matrices for one
    element keyed 'K', 'KG', 'M', 'A', 'DA'.
    """
    ndof = DOFS_PER_NODE * mesh.n_nodes
    rows, cols = [], []
    vals = {k: [] for k in ("K", "KG", "M", "A", "DA")}
    for tri in mesh.triangles:
        mats = element_matrices(mesh.nodes[tri])
        gdof = (DOFS_PER_NODE * tri[:, None] + np.arange(DOFS_PER_NODE)).ravel()
        rows.append(np.repeat(gdof, 15))
        cols.append(np.tile(gdof, 15))
        for key in vals:
            vals[key].append(mats[key].ravel())
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    built = {}
    for key, chunks in vals.items():
        built[key] = sp.coo_matrix((np.concatenate(chunks), (rows, cols)),
                                   shape=(ndof, ndof)).tocsr()
    return GlobalSystem(K=built["K"], KG=built["KG"], M=built["M"],
                        A=built["A"], DA=built["DA"],
                        free=np.arange(ndof), skew_angle=mesh.skew_angle)


SHEAR_STAB_ALPHA = 0.001


def build_system(mesh: TriMesh, section: FGMSection,
                 theta_prime: float = 0.0,
                 sec_props: SectionProperties | None = None,
                 shear_stab_alpha: float = SHEAR_STAB_ALPHA) -> GlobalSystem:
    """Assemble all five operators for a uniform section over the mesh.

    The geometric stiffness uses the restrained thermal state, i.e. the
    in-plane resultants -Nth, so heating softens the plate.  The shear
    stiffness of each element is scaled by h^2/(h^2 + alpha*le^2) with le
    its longest edge, which only matters for extreme slenderness.
    """
    sec = sec_props if sec_props is not None else section_properties(section)
    prestress = -sec.Nth
    h = section.h

    def per_element(coords):
        geom = ElementGeometry.from_coords(coords)
        ops = cs_smooth(geom)
        le2 = max(np.sum((coords[i] - coords[j]) ** 2)
                  for i, j in ((0, 1), (1, 2), (2, 0)))
        factor = h * h / (h * h + shear_stab_alpha * le2)
        return {
            "K": element_stiffness(ops, sec, geom.area, factor),
            "KG": element_geometric_stiffness(geom, prestress, h),
            "M": element_mass(geom, sec),
            "A": element_aero(geom, theta_prime),
            "DA": element_aero_damping(geom),
        }

    return assemble(mesh, per_element)


def skew_rotation(psi: float) -> np.ndarray:
    """5x5 nodal frame rotation: (u,v) and (tx,ty) pairs rotate, w is fixed."""
    c, s = np.cos(psi), np.sin(psi)
    L = np.eye(5)
    L[0, 0] = c
    L[0, 1] = s
    L[1, 0] = -s
    L[1, 1] = c
    L[3, 3] = c
    L[3, 4] = s
    L[4, 3] = -s
    L[4, 4] = c
    return L


def apply_skew_transform(system: GlobalSystem, mesh: TriMesh) -> GlobalSystem:
    """Rotate DOFs of oblique-edge nodes into edge-local frames.

    After the plate shear map the former x = 0, a edges are oblique; their
    nodes get the 5x5 rotation so that boundary conditions can be written
    edge-locally.  An orthogonal congruence, so generalized eigenvalues are
    untouched.
    """
    psi = mesh.skew_angle
    if psi == 0.0:
        return system
    oblique = sorted(set(mesh.tagged("edge_x0")) | set(mesh.tagged("edge_xa")))
    ndof = system.n_dof
    L = skew_rotation(psi)
    rows, cols, data = [], [], []
    marked = np.zeros(mesh.n_nodes, dtype=bool)
    marked[list(oblique)] = True
    for node in range(mesh.n_nodes):
        base = DOFS_PER_NODE * node
        blk = L if marked[node] else np.eye(5)
        for i in range(5):
            for j in range(5):
                if blk[i, j] != 0.0:
                    rows.append(base + i)
                    cols.append(base + j)
                    data.append(blk[i, j])
    T = sp.coo_matrix((data, (rows, cols)), shape=(ndof, ndof)).tocsr()
    out = {k: (T.T @ m @ T).tocsr() for k, m in system.matrices().items()}
    return replace(system, K=out["K"], KG=out["KG"], M=out["M"],
                   A=out["A"], DA=out["DA"], skew_nodes=tuple(oblique))


def apply_bc(system: GlobalSystem, mesh: TriMesh, bc: str) -> GlobalSystem:
    """Constrain outer edges and reduce by row/column deletion.

    SSSS fixes (u, w, ty) on the x-family edges and (v, w, tx) on the
    y-family, in edge-local frames where a skew transform is active; corner
    nodes take the union of both sets.  CCCC fixes all five DOFs.  Hole
    nodes are never constrained.
    """
    try:
        sets = _BC_SETS[bc]
    except KeyError:
        raise ValueError(f"unknown boundary condition {bc!r}") from None
    fixed = np.zeros(system.n_dof, dtype=bool)
    for node, tags in enumerate(mesh.node_tags):
        on_x = "edge_x0" in tags or "edge_xa" in tags
        on_y = "edge_y0" in tags or "edge_yb" in tags
        local = set()
        if on_x:
            local.update(sets["x"])
        if on_y:
            local.update(sets["y"])
        if on_x and on_y:
            local = {0, 1, 2, 3, 4}
        for k in local:
            fixed[DOFS_PER_NODE * node + k] = True
    free = np.where(~fixed)[0]
    out = {k: m[free][:, free].tocsr() for k, m in system.matrices().items()}
    return replace(system, K=out["K"], KG=out["KG"], M=out["M"],
                   A=out["A"], DA=out["DA"], free=system.free[free])


def dump_system(system: GlobalSystem, prefix) -> list:
    """Write each operator as text lines 'row col value' (one file per matrix)."""
    written = []
    for name, mat in system.matrices().items():
        path = f"{prefix}{name}.txt"
        coo = mat.tocoo()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# {mat.shape[0]} {mat.shape[1]} {coo.nnz}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {float(v)!r}\n")
        written.append(path)
    return written
