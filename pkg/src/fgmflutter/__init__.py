"""Supersonic flutter of functionally graded flat panels.

Smoothed 3-node Mindlin triangles (DSG3 shear treatment with cell-based
strain smoothing), power-law ceramic/metal grading with temperature
dependence, piston-theory aerodynamics and eigenvalue-coalescence flutter
boundaries, including thermal environments, skew geometry and central
circular cutouts.
"""

from .assembly import (GlobalSystem, apply_bc, apply_skew_transform, assemble,
                       build_system, dump_system)
from .driver import (DEFAULT_G_BAR, PlateCase, build_case, isotropic_case,
                     normalization_refs, run_case)
from .element import (ElementGeometry, StrainOperators, cs_smooth,
                      dsg3_operators, element_aero, element_aero_damping,
                      element_geometric_stiffness, element_mass,
                      element_stiffness)
from .flutter import (EigenBranch, FlutterResult, ModalBasis,
                      NormalizationRefs, SweepConfig, damped_flutter,
                      modal_basis, normalize, solve_eigen, sweep_and_detect,
                      write_branch_csv, write_summary)
from .materials import (MATERIALS, Constituent, ConstituentSet, FGMSection,
                        SectionProperties, TemperatureCoefficients,
                        effective_density, effective_kappa_alpha,
                        load_constituent, mori_tanaka_effective,
                        property_at_temperature, section_properties,
                        temperature_profile, volume_fraction)
from .meshing import (TriMesh, apply_skew, check_conformity, cutout_mesh,
                      dof_map, load_mesh, min_quality, save_mesh,
                      structured_rect_mesh)

__version__ = "0.1.0"
