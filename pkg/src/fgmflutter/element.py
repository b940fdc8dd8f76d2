"""CS-DSG3 triangular Mindlin plate element.

Each 3-node triangle carries 5 DOFs per node in the order
(u, v, w, theta_x, theta_y), 15 per element.  Strains are computed with the
discrete-shear-gap (DSG3) operators on the three subtriangles formed by the
centroid, the centroid DOFs are eliminated by the nodal average, and the
subtriangle operators are area-averaged over the element (cell-based strain
smoothing).  The averaging only alters the shear operator; membrane and
bending operators of the linear field are reproduced identically, which the
tests assert.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .materials import SectionProperties

__all__ = [
    "ElementGeometry",
    "StrainOperators",
    "dsg3_operators",
    "cs_smooth",
    "element_stiffness",
    "element_mass",
    "element_geometric_stiffness",
    "element_aero",
    "element_aero_damping",
]

_U, _V, _W, _TX, _TY = 0, 1, 2, 3, 4

# 3-point rule at edge midpoints, exact for quadratics
_TRI3_POINTS = np.array([[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]])
_TRI3_WEIGHTS = np.array([1.0, 1.0, 1.0]) / 3.0


@dataclass(frozen=True)
class ElementGeometry:
    """Coordinates, centroid and subtriangle areas of one triangle."""

    coords: np.ndarray            # (3, 2), CCW
    center: np.ndarray            # centroid
    area: float
    sub_areas: np.ndarray         # areas of (O,1,2), (O,2,3), (O,3,1)

    @classmethod
    def from_coords(cls, coords) -> "ElementGeometry":
        coords = np.asarray(coords, dtype=float)
        area = _signed_area(coords[0], coords[1], coords[2])
        if area <= 0.0:
            raise ValueError("element nodes must be counter-clockwise with positive area")
        o = coords.mean(axis=0)
        subs = np.array([
            _signed_area(o, coords[0], coords[1]),
            _signed_area(o, coords[1], coords[2]),
            _signed_area(o, coords[2], coords[0]),
        ])
        return cls(coords=coords, center=o, area=area, sub_areas=subs)


@dataclass(frozen=True)
class StrainOperators:
    """Smoothed strain-displacement matrices of one element."""

    Bp: np.ndarray                # 3 x 15 membrane
    Bb: np.ndarray                # 3 x 15 bending
    Bs: np.ndarray                # 2 x 15 transverse shear


def _signed_area(p0, p1, p2) -> float:
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1])
                  - (p2[0] - p0[0]) * (p1[1] - p0[1]))


def shape_gradients(coords):
    """Constant gradients of the linear shape functions: rows (x, y), cols nodes."""
    (x1, y1), (x2, y2), (x3, y3) = coords
    two_a = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    gx = np.array([y2 - y3, y3 - y1, y1 - y2]) / two_a
    gy = np.array([x3 - x2, x1 - x3, x2 - x1]) / two_a
    return gx, gy


def dsg3_operators(coords):
    """DSG3 strain operators of a single triangle given by its node coords.

    Returns (Bp, Bb, Bs, area).  Bp and Bb are the constant-strain-triangle
    operators acting on (u, v) and (theta_x, theta_y); Bs is the altered
    shear operator from the discrete shear gaps, with the edge constants
    a = x2-x1, b = y2-y1, c = y3-y1, d = x3-x1.
    """
    (x1, y1), (x2, y2), (x3, y3) = coords
    a = x2 - x1
    b = y2 - y1
    c = y3 - y1
    d = x3 - x1
    area = 0.5 * (a * c - b * d)
    if area <= 0.0:
        raise ValueError("degenerate or inverted triangle in DSG3 operator")
    f = 1.0 / (2.0 * area)

    Bp = np.zeros((3, 15))
    Bb = np.zeros((3, 15))
    Bs = np.zeros((2, 15))

    Bp[0, _U] = b - c
    Bp[0, 5 + _U] = c
    Bp[0, 10 + _U] = -b
    Bp[1, _V] = d - a
    Bp[1, 5 + _V] = -d
    Bp[1, 10 + _V] = a
    Bp[2, [_U, _V]] = (d - a, b - c)
    Bp[2, [5 + _U, 5 + _V]] = (-d, c)
    Bp[2, [10 + _U, 10 + _V]] = (a, -b)

    Bb[0, _TX] = b - c
    Bb[0, 5 + _TX] = c
    Bb[0, 10 + _TX] = -b
    Bb[1, _TY] = d - a
    Bb[1, 5 + _TY] = -d
    Bb[1, 10 + _TY] = a
    Bb[2, [_TX, _TY]] = (d - a, b - c)
    Bb[2, [5 + _TX, 5 + _TY]] = (-d, c)
    Bb[2, [10 + _TX, 10 + _TY]] = (a, -b)

    Bs[0, [_W, _TX]] = (b - c, area)
    Bs[0, [5 + _W, 5 + _TX, 5 + _TY]] = (c, a * c / 2.0, b * c / 2.0)
    Bs[0, [10 + _W, 10 + _TX, 10 + _TY]] = (-b, -b * d / 2.0, -b * c / 2.0)
    Bs[1, [_W, _TY]] = (d - a, area)
    Bs[1, [5 + _W, 5 + _TX, 5 + _TY]] = (-d, -a * d / 2.0, -b * d / 2.0)
    Bs[1, [10 + _W, 10 + _TX, 10 + _TY]] = (a, a * d / 2.0, a * c / 2.0)

    return f * Bp, f * Bb, f * Bs, area


def cs_smooth(geom: ElementGeometry) -> StrainOperators:
    """Area-averaged strain operators over the three centroid subtriangles.

    Subtriangle i is (O, node_i, node_j); its first local node is the center,
    whose DOFs are the average of the three element nodes.  Substituting
    that average folds the local operator columns onto the element DOFs
    before the area-weighted sum.
    """
    coords = geom.coords
    o = geom.center
    Bp = np.zeros((3, 15))
    Bb = np.zeros((3, 15))
    Bs = np.zeros((2, 15))
    for isub, (i, j, k) in enumerate(((0, 1, 2), (1, 2, 0), (2, 0, 1))):
        bp, bb, bs, _ = dsg3_operators(np.array([o, coords[i], coords[j]]))
        w = geom.sub_areas[isub] / geom.area
        for B, loc in ((Bp, bp), (Bb, bb), (Bs, bs)):
            ctr = loc[:, 0:5] / 3.0
            B[:, 5 * i:5 * i + 5] += w * (ctr + loc[:, 5:10])
            B[:, 5 * j:5 * j + 5] += w * (ctr + loc[:, 10:15])
            B[:, 5 * k:5 * k + 5] += w * ctr
    return StrainOperators(Bp=Bp, Bb=Bb, Bs=Bs)


def element_stiffness(ops: StrainOperators, sec: SectionProperties,
                      area: float, shear_factor: float = 1.0) -> np.ndarray:
    """Smoothed element stiffness (Bp'A Bp + Bp'B Bb + Bb'B Bp + Bb'Db Bb + Bs'Es Bs) * area.

    shear_factor scales the transverse shear stiffness; the assembly passes
    h^2/(h^2 + alpha*le^2), which is within a fraction of a percent of one
    for engineering slenderness but caps the shear penalty on extremely
    thin plates where parasitic gap energy would otherwise lock the mesh.
    """
    Bp, Bb, Bs = ops.Bp, ops.Bb, ops.Bs
    Ke = (Bp.T @ sec.A @ Bp
          + Bp.T @ sec.B @ Bb
          + Bb.T @ sec.B @ Bp
          + Bb.T @ sec.Db @ Bb
          + Bs.T @ (shear_factor * sec.Es) @ Bs) * area
    return Ke


def _w_mass_block(area: float) -> np.ndarray:
    return (area / 12.0) * np.array([[2.0, 1.0, 1.0],
                                     [1.0, 2.0, 1.0],
                                     [1.0, 1.0, 2.0]])


def element_mass(geom: ElementGeometry, sec: SectionProperties) -> np.ndarray:
    """Consistent mass: translations weighted by p, rotations by I."""
    m3 = _w_mass_block(geom.area)
    Me = np.zeros((15, 15))
    for dof, coef in ((_U, sec.p), (_V, sec.p), (_W, sec.p),
                      (_TX, sec.I), (_TY, sec.I)):
        idx = [dof, 5 + dof, 10 + dof]
        Me[np.ix_(idx, idx)] = coef * m3
    return Me


def element_geometric_stiffness(geom: ElementGeometry, nres, h: float) -> np.ndarray:
    """Geometric stiffness from in-plane stress resultants (tension positive).

    nres = (N_xx, N_yy, N_xy).  Gradients of w enter with unit weight and the
    rotation gradients with h^2/12; a restrained thermal state is passed as
    the negative of the thermal force resultants.
    """
    nxx, nyy, nxy = nres
    Nmat = np.array([[nxx, nxy], [nxy, nyy]])
    gx, gy = shape_gradients(geom.coords)
    G = np.vstack([gx, gy])
    blk = geom.area * (G.T @ Nmat @ G)
    KG = np.zeros((15, 15))
    iw = [_W, 5 + _W, 10 + _W]
    itx = [_TX, 5 + _TX, 10 + _TX]
    ity = [_TY, 5 + _TY, 10 + _TY]
    KG[np.ix_(iw, iw)] = blk
    rot = (h * h / 12.0) * blk
    KG[np.ix_(itx, itx)] = rot
    KG[np.ix_(ity, ity)] = rot
    return KG


def element_aero(geom: ElementGeometry, theta_prime: float = 0.0) -> np.ndarray:
    """Piston-theory influence matrix: int Nw^T (cos t' dNw/dx + sin t' dNw/dy).

    Only the w block is populated; the system-level dynamic pressure
    multiplies this matrix.  Generally unsymmetric.
    """
    gx, gy = shape_gradients(geom.coords)
    slope = np.cos(theta_prime) * gx + np.sin(theta_prime) * gy
    Ae = np.zeros((15, 15))
    iw = [_W, 5 + _W, 10 + _W]
    acc = np.zeros((3, 3))
    for (l2, l3), wgt in zip(_TRI3_POINTS, _TRI3_WEIGHTS):
        N = np.array([1.0 - l2 - l3, l2, l3])
        acc += wgt * geom.area * np.outer(N, slope)
    Ae[np.ix_(iw, iw)] = acc
    return Ae


def element_aero_damping(geom: ElementGeometry) -> np.ndarray:
    """Unit-density transverse mass block (w DOFs only); shear and rotary
    inertia are dropped, so this equals the w block of the mass matrix
    divided by p."""
    DAe = np.zeros((15, 15))
    iw = [_W, 5 + _W, 10 + _W]
    DAe[np.ix_(iw, iw)] = _w_mass_block(geom.area)
    return DAe
