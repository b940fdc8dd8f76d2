"""Eigenvalue coalescence: sweeping the dynamic pressure to the boundary.

Tracks the lowest eigenvalue branches of the aeroelastic pencil while the
piston-theory pressure grows, locates the first sustained coalescence, and
writes the branch history CSV (plot lambda against re_kappa to see the two
branches merge).  Run:

    python demos/04_flutter_sweep.py
"""

import pathlib

from fgmflutter import PlateCase, run_case, write_branch_csv, write_summary

case = PlateCase(n=1.0, Tc=300.0, nx=20, ny=20)
rec = run_case(case, lambda_bar_max=800.0, keep_result=True)
res, refs = rec["result"], rec["refs"]

print("Si3N4/SUS304, n = 1, SSSS square, a/h = 20, flow along x")
print(f"  tracked branches: {len(res.branches.values[0])}")
print(f"  sweep steps to the bracket: {len(res.branches.lambdas)}")
print(f"  lambda_cr  = {rec['lambda_cr']:.2f}   (lambda a^3 / D_m)")
print(f"  omega_cr^2 = {rec['omega_cr_sq']:.2f} (omega^2 a^4 rho_m h / D_m)")
print(f"  merged branches: {res.mode_pair}")
lo, hi = res.bracket
print(f"  bisected bracket: [{refs.pressure(lo):.3f}, {refs.pressure(hi):.3f}]")

out = pathlib.Path(__file__).parent
write_branch_csv(res, out / "demo_branches.csv", refs)
write_summary(res, out / "demo_summary.csv", refs)
print(f"\nwrote {out / 'demo_branches.csv'} and {out / 'demo_summary.csv'}")

# the damped boundary sits above the undamped one
damped = run_case(case, lambda_bar_max=800.0, damped=True)
print(f"\nwith aerodynamic damping: lambda_cr = {damped['lambda_cr']:.2f} "
      f"(+{100 * (damped['lambda_cr'] / rec['lambda_cr'] - 1):.2f}%)")
