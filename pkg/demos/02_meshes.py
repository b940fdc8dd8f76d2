"""Mesh generation gallery: plain, skewed and perforated plates.

Builds each mesh type, reports its quality statistics and writes the
plain-text mesh files next to this script.  Run:

    python demos/02_meshes.py
"""

import math
import pathlib

from fgmflutter import (apply_skew, check_conformity, cutout_mesh,
                        min_quality, save_mesh, structured_rect_mesh)

out = pathlib.Path(__file__).with_suffix("") .parent

rect = structured_rect_mesh(1.0, 1.0, 16, 16)
check_conformity(rect)
print(f"16x16 square:      {rect.n_nodes:4d} nodes {len(rect.triangles):4d} "
      f"triangles  area {rect.areas().sum():.6f}  min quality "
      f"{min_quality(rect):.3f}")

skew = apply_skew(structured_rect_mesh(1.0, 1.0, 16, 16), math.radians(30.0))
check_conformity(skew)
print(f"30 deg skew:       {skew.n_nodes:4d} nodes {len(skew.triangles):4d} "
      f"triangles  area {skew.areas().sum():.6f} (= cos 30 deg)  min quality "
      f"{min_quality(skew):.3f}")

for r_over_a in (0.1, 0.2, 0.4):
    mesh = cutout_mesh(1.0, 1.0, r_over_a, refinement=2)
    check_conformity(mesh)
    print(f"cutout r/a = {r_over_a}: {mesh.n_nodes:4d} nodes "
          f"{len(mesh.triangles):4d} triangles  area {mesh.areas().sum():.6f}"
          f"  min quality {min_quality(mesh):.3f} "
          f" ({len(mesh.tagged('hole'))} hole-rim nodes)")

path = out / "demo_cutout.mesh"
save_mesh(cutout_mesh(1.0, 1.0, 0.2, refinement=2), path)
print(f"\nwrote {path} (plain-text format: header, node lines, triangle lines)")
