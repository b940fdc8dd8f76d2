"""Parameter studies: thermal environment, skew angle and cutout size.

Small-mesh versions of the benchmark studies (the CLI `table` subcommand
runs the full-resolution ones).  Run:

    python demos/05_parameter_studies.py
"""

from fgmflutter import PlateCase, run_case

print("thermal environment (SSSS square, a/h = 20, n = 1):")
for Tc in (300.0, 450.0, 600.0):
    rec = run_case(PlateCase(n=1.0, Tc=Tc, nx=16, ny=16),
                   lambda_bar_max=800.0)
    print(f"  Tc = {Tc:4.0f} K: lambda_cr = {rec['lambda_cr']:7.2f}")
print("  the hotter ceramic face builds compressive membrane stress and")
print("  lowers the boundary.")

print()
print("skew angle (Tc = 600 K, n = 0):")
for psi in (0.0, 15.0, 30.0):
    rec = run_case(PlateCase(n=0.0, Tc=600.0, psi_deg=psi, nx=16, ny=16),
                   lambda_bar_max=1100.0)
    print(f"  psi = {psi:4.1f} deg: lambda_cr = {rec['lambda_cr']:7.2f}")
print("  oblique edges stiffen the panel against the streamwise waves.")

print()
print("central circular cutout (uniform temperature, n = 0):")
for r_over_a in (0.0, 0.1, 0.2):
    case = (PlateCase(n=0.0, nx=16, ny=16) if r_over_a == 0 else
            PlateCase(n=0.0, r_over_a=r_over_a, refinement=3))
    rec = run_case(case, lambda_bar_max=2400.0)
    print(f"  r/a = {r_over_a:3.1f}: lambda_cr = {rec['lambda_cr']:7.2f}")
print("  removing the compliant centre raises the coalescence pressure.")
