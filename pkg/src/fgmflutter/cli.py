"""Configuration-driven batch runner and command line interface.

Subcommands
-----------
run          sweep every parameter combination of a config file and write a
             results table plus per-run branch traces
table        recompute one of the built-in benchmark studies and report
             deviations against the shipped reference values
mesh-export  generate a mesh and write it in the plain-text format

The config grammar is line based: ``key = value`` with ``#`` comments,
comma-separated lists, and ``Tc/Tm`` pairs for temperature cases (see the
README for the full key list).
"""

from __future__ import annotations

import argparse
import csv
import importlib.resources
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .driver import DEFAULT_G_BAR, PlateCase, run_case
from .flutter import write_branch_csv
from .meshing import apply_skew, cutout_mesh, save_mesh, structured_rect_mesh

TABLE_IDS = ("mesh_convergence", "validation", "aspect_ratio", "temperature",
             "skew", "boundary", "thickness", "cutout")

# runtime is reported on the console only so identical configs rewrite
# byte-identical result files
RESULT_FIELDS = ("a_over_b", "a_over_h", "psi_deg", "r_over_a", "material",
                 "n", "Tc", "Tm", "bc", "mesh", "damped", "normalization",
                 "found", "lambda_cr", "omega_cr_sq", "n_dof", "error")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "a_over_b": "1.0",
    "a_over_h": "20",
    "skew_deg": "0",
    "r_over_a": "0",
    "material": "Si3N4/SUS304",
    "n": "0",
    "T": "300/300",
    "bc": "SSSS",
    "nx": "24",
    "ny": "24",
    "refinement": "3",
    "theta_prime_deg": "0",
    "normalization": "metal",
    "lambda_max": "1000",
    "steps": "200",
    "n_modes": "10",
    "damped": "false",
    "g_bar": str(DEFAULT_G_BAR),
    "basis_size": "auto",
    "out_dir": "results",
}


@dataclass
class RunConfig:
    """Parsed batch configuration: geometry, grids and sweep settings."""

    a_over_b: float
    a_over_h: float
    skew_deg: float
    r_over_a: float
    material: str
    n_list: list
    temps: list                  # list of (Tc, Tm)
    bc: str
    nx: int
    ny: int
    refinement: int
    theta_prime_deg: float
    normalization: str
    lambda_max: float
    steps: int
    n_modes: int
    damped: list                 # [False], [True] or both
    g_bar: float
    basis_size: int | None
    out_dir: Path

    def cases(self):
        for damped in self.damped:
            for Tc, Tm in self.temps:
                for n in self.n_list:
                    yield PlateCase(
                        a_over_b=self.a_over_b, a_over_h=self.a_over_h,
                        psi_deg=self.skew_deg, r_over_a=self.r_over_a,
                        material=self.material, n=n, Tc=Tc, Tm=Tm,
                        bc=self.bc, nx=self.nx, ny=self.ny,
                        refinement=self.refinement,
                        theta_prime=math.radians(self.theta_prime_deg),
                        normalization=self.normalization,
                    ), damped


def parse_config(path=None, overrides=()) -> RunConfig:
    """Read key = value lines, apply overrides, validate and build the config."""
    raw = dict(_DEFAULTS)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, val = (s.strip() for s in stripped.split("=", 1))
                if key not in _DEFAULTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                raw[key] = val
    for item in overrides:
        if "=" not in item:
            raise UsageError(f"override {item!r} must be key=value")
        key, val = (s.strip() for s in item.split("=", 1))
        if key not in _DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        raw[key] = val
    return _build_config(raw)


def _build_config(raw) -> RunConfig:
    def floats(text):
        return [float(v) for v in text.split(",") if v.strip()]

    n_list = floats(raw["n"])
    if not n_list:
        raise UsageError("empty gradient-index list")
    temps = []
    for pair in raw["T"].split(","):
        pair = pair.strip()
        if not pair:
            continue
        try:
            tc, tm = (float(v) for v in pair.split("/"))
        except ValueError:
            raise UsageError(f"temperature entry {pair!r} is not 'Tc/Tm'") from None
        temps.append((tc, tm))
    if not temps:
        raise UsageError("empty temperature list")
    damped_raw = raw["damped"].lower()
    if damped_raw not in ("true", "false", "both"):
        raise UsageError("damped must be true, false or both")
    damped = {"true": [True], "false": [False],
              "both": [False, True]}[damped_raw]
    bc = raw["bc"].upper()
    if bc not in ("SSSS", "CCCC"):
        raise UsageError(f"unknown boundary condition {bc!r}")
    if raw["normalization"] not in ("metal", "ceramic", "isotropic"):
        raise UsageError(f"unknown normalization {raw['normalization']!r}")
    basis = None if raw["basis_size"] == "auto" else int(raw["basis_size"])
    try:
        return RunConfig(
            a_over_b=float(raw["a_over_b"]), a_over_h=float(raw["a_over_h"]),
            skew_deg=float(raw["skew_deg"]), r_over_a=float(raw["r_over_a"]),
            material=raw["material"], n_list=n_list, temps=temps, bc=bc,
            nx=int(raw["nx"]), ny=int(raw["ny"]),
            refinement=int(raw["refinement"]),
            theta_prime_deg=float(raw["theta_prime_deg"]),
            normalization=raw["normalization"],
            lambda_max=float(raw["lambda_max"]), steps=int(raw["steps"]),
            n_modes=int(raw["n_modes"]), damped=damped,
            g_bar=float(raw["g_bar"]), basis_size=basis,
            out_dir=Path(raw["out_dir"]),
        )
    except ValueError as exc:
        raise UsageError(f"malformed config value: {exc}") from None


# ---------------------------------------------------------------------------
# benchmark reference data
# ---------------------------------------------------------------------------

def load_benchmarks(table_id=None) -> list:
    """Rows of the shipped reference table, optionally filtered by study."""
    text = (importlib.resources.files("fgmflutter") / "data" /
            "benchmarks.csv").read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        if table_id is not None and rec["table"] != table_id:
            continue
        rows.append({
            "table": rec["table"],
            "mesh_nx": int(rec["mesh_nx"]) if rec["mesh_nx"] else None,
            "a_over_b": float(rec["a_over_b"]),
            "a_over_h": float(rec["a_over_h"]),
            "psi_deg": float(rec["psi_deg"]),
            "r_over_a": float(rec["r_over_a"]),
            "n": float(rec["n"]),
            "Tc": float(rec["Tc"]),
            "Tm": float(rec["Tm"]),
            "bc": rec["bc"],
            "damped": rec["damped"] == "1",
            "normalization": rec["normalization"],
            "lambda_ref": float(rec["lambda_ref"]) if rec["lambda_ref"] else None,
            "omega2_ref": float(rec["omega2_ref"]) if rec["omega2_ref"] else None,
            "suspect": rec["suspect"] == "1",
            "note": rec["note"],
        })
    return rows


# ---------------------------------------------------------------------------
# execution helpers
# ---------------------------------------------------------------------------

def _execute(job):
    case, kwargs = job
    try:
        rec = run_case(case, **kwargs)
        rec["error"] = ""
        # drop the heavy operators, keep what the trace writers need
        rec.pop("system", None)
        rec.pop("basis", None)
        rec.pop("section_props", None)
        return rec
    except Exception as exc:          # per-row failures must not kill the batch
        return {
            "a_over_b": case.a_over_b, "a_over_h": case.a_over_h,
            "psi_deg": case.psi_deg, "r_over_a": case.r_over_a,
            "material": case.material, "n": case.n, "Tc": case.Tc,
            "Tm": case.Tm, "bc": case.bc, "mesh": f"{case.nx}x{case.ny}",
            "damped": kwargs.get("damped", False),
            "normalization": case.normalization, "found": False,
            "lambda_cr": None, "omega_cr_sq": None, "n_dof": None,
            "runtime_s": None, "error": f"{type(exc).__name__}: {exc}",
        }


def _run_jobs(jobs, workers, verbose):
    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, rec in enumerate(pool.map(_execute, jobs)):
                results.append(rec)
                if verbose:
                    _print_row(i, rec)
    else:
        for i, job in enumerate(jobs):
            rec = _execute(job)
            results.append(rec)
            if verbose:
                _print_row(i, rec)
    return results


def _print_row(i, rec):
    if rec["error"]:
        print(f"[{i}] FAILED: {rec['error']}", file=sys.stderr)
    else:
        lam = rec["lambda_cr"]
        lam_txt = f"{lam:.4f}" if lam is not None else "no flutter in range"
        print(f"[{i}] n={rec['n']} T={rec['Tc']:.0f}/{rec['Tm']:.0f} "
              f"damped={rec['damped']} -> lambda_cr={lam_txt} "
              f"[{rec['runtime_s']}s]")


def _write_results_csv(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_FIELDS)
        writer.writeheader()
        for rec in rows:
            writer.writerow({k: rec.get(k, "") for k in RESULT_FIELDS})


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    cfg = parse_config(args.config, args.set or ())
    out_dir = Path(args.out) if args.out else cfg.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    jobs = []
    for case, damped in cfg.cases():
        jobs.append((case, dict(
            lambda_bar_max=cfg.lambda_max, n_steps=cfg.steps, damped=damped,
            g_bar=cfg.g_bar, n_modes_tracked=cfg.n_modes,
            basis_size=cfg.basis_size, keep_result=not args.no_traces,
        )))
    results = _run_jobs(jobs, args.workers, args.verbose)

    for i, rec in enumerate(results):
        if "result" in rec:
            write_branch_csv(rec["result"], out_dir / f"branches_{i:03d}.csv",
                             rec["refs"])

    _write_results_csv(out_dir / "results.csv", results)
    with open(out_dir / "report.txt", "w", encoding="utf-8") as fh:
        fh.write("flutter batch results\n")
        fh.write(f"{'n':>5} {'Tc':>6} {'Tm':>6} {'damped':>7} "
                 f"{'lambda_cr':>12} {'omega_cr^2':>12}\n")
        for rec in results:
            lam = rec["lambda_cr"]
            om = rec["omega_cr_sq"]
            fh.write(f"{rec['n']:>5} {rec['Tc']:>6.0f} {rec['Tm']:>6.0f} "
                     f"{str(rec['damped']):>7} "
                     f"{lam if lam is not None else 'n/a':>12} "
                     f"{om if om is not None else 'n/a':>12}"
                     + (f"  ERROR {rec['error']}" if rec["error"] else "")
                     + "\n")
    failures = sum(1 for rec in results if rec["error"])
    print(f"wrote {out_dir / 'results.csv'} ({len(results)} rows, "
          f"{failures} failed)")
    return 1 if failures else 0


def _table_case(row, quick):
    """PlateCase and sweep settings for one benchmark row."""
    if row["mesh_nx"] is not None:
        nx = ny = row["mesh_nx"]
    elif quick:
        nx = ny = 16
    else:
        nx = ny = 40
    refinement = (2 if quick else 5)
    # square-ish elements for long plates
    if row["a_over_b"] > 1:
        ny = max(4, int(round(nx / row["a_over_b"])))
    elif row["a_over_b"] < 1:
        ny = min(64, int(round(nx / row["a_over_b"])))
    case = PlateCase(
        a_over_b=row["a_over_b"], a_over_h=row["a_over_h"],
        psi_deg=row["psi_deg"], r_over_a=row["r_over_a"], n=row["n"],
        Tc=row["Tc"], Tm=row["Tm"], bc=row["bc"], nx=nx, ny=ny,
        refinement=refinement, normalization=row["normalization"],
    )
    return case


def cmd_table(args) -> int:
    if args.table_id not in TABLE_IDS:
        raise UsageError(f"unknown table id {args.table_id!r}; "
                         f"choose from {', '.join(TABLE_IDS)}")
    rows = load_benchmarks(args.table_id)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    ref_max = max(r["lambda_ref"] for r in rows if not r["suspect"])
    jobs = []
    for row in rows:
        case = _table_case(row, args.quick)
        jobs.append((case, dict(lambda_bar_max=1.6 * ref_max, n_steps=320,
                                damped=row["damped"])))
    results = _run_jobs(jobs, args.workers, args.verbose)

    out_rows = []
    devs = []
    for row, rec in zip(rows, results):
        lam = rec["lambda_cr"]
        dev = None
        if lam is not None and row["lambda_ref"] and not row["suspect"]:
            dev = 100.0 * (lam / row["lambda_ref"] - 1.0)
            devs.append(abs(dev))
        out_rows.append({**{k: row[k] for k in (
            "a_over_b", "a_over_h", "psi_deg", "r_over_a", "n", "Tc", "Tm",
            "bc", "damped", "normalization")},
            "mesh": rec.get("mesh"),
            "lambda_cr": lam, "lambda_ref": row["lambda_ref"],
            "lambda_dev_pct": None if dev is None else round(dev, 3),
            "omega_cr_sq": rec["omega_cr_sq"],
            "omega2_ref": row["omega2_ref"],
            "suspect": row["suspect"], "note": row["note"],
            "error": rec["error"]})

    csv_path = out_dir / f"table_{args.table_id}.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(out_rows[0]))
        writer.writeheader()
        writer.writerows(out_rows)

    report_path = out_dir / f"table_{args.table_id}.txt"
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(f"benchmark study: {args.table_id}"
                 + (" (quick meshes)" if args.quick else "") + "\n\n")
        for r in out_rows:
            lam = "n/a" if r["lambda_cr"] is None else f"{r['lambda_cr']:10.4f}"
            ref = "n/a" if r["lambda_ref"] is None else f"{r['lambda_ref']:10.4f}"
            dev = ("  suspect reference, excluded" if r["suspect"]
                   else ("" if r["lambda_dev_pct"] is None
                         else f"  dev {r['lambda_dev_pct']:+6.2f}%"))
            fh.write(f"a/b={r['a_over_b']:<4} a/h={r['a_over_h']:<5} "
                     f"psi={r['psi_deg']:<4} r/a={r['r_over_a']:<4} "
                     f"n={r['n']:<3} T={r['Tc']:.0f}/{r['Tm']:.0f} "
                     f"{r['bc']} damped={int(r['damped'])}: "
                     f"computed {lam} reference {ref}{dev}\n")
        suspects = [r for r in out_rows if r["suspect"]]
        if suspects:
            fh.write("\nsuspected misprints in the reference data "
                     "(excluded from the deviation statistics):\n")
            for r in suspects:
                fh.write(f"  a/b={r['a_over_b']} psi={r['psi_deg']} "
                         f"n={r['n']} {r['bc']}: printed {r['lambda_ref']}"
                         f" -- {r['note']}\n")
        if devs:
            fh.write(f"\nmean |deviation| {sum(devs) / len(devs):.2f}%  "
                     f"max {max(devs):.2f}%\n")
    failures = sum(1 for rec in results if rec["error"])
    print(f"wrote {csv_path} and {report_path} ({failures} failed rows)")
    return 1 if failures else 0


def cmd_mesh_export(args) -> int:
    if args.r_over_a > 0:
        mesh = cutout_mesh(args.a, args.b, args.r_over_a * args.a,
                           args.refinement)
    else:
        mesh = structured_rect_mesh(args.a, args.b, args.nx, args.ny)
        if args.skew_deg:
            mesh = apply_skew(mesh, math.radians(args.skew_deg))
    save_mesh(mesh, args.out)
    print(f"wrote {args.out} ({mesh.n_nodes} nodes, "
          f"{len(mesh.triangles)} triangles)")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fgmflutter",
        description="Supersonic flutter boundaries of functionally graded "
                    "panels (smoothed triangular Mindlin elements).")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run every case of a config file")
    p_run.add_argument("--config", help="path to the key = value config")
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key")
    p_run.add_argument("--out", help="output directory (default from config)")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--no-traces", action="store_true",
                       help="skip the per-run branch CSVs")
    p_run.add_argument("--verbose", "-v", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_tab = sub.add_parser("table", help="reproduce a benchmark study")
    p_tab.add_argument("table_id", help=", ".join(TABLE_IDS))
    p_tab.add_argument("--out", default="results")
    p_tab.add_argument("--quick", action="store_true",
                       help="coarse meshes (fast, roughly 2-3%% bias)")
    p_tab.add_argument("--workers", type=int, default=1)
    p_tab.add_argument("--verbose", "-v", action="store_true")
    p_tab.set_defaults(func=cmd_table)

    p_mesh = sub.add_parser("mesh-export", help="write a mesh file")
    p_mesh.add_argument("--out", required=True)
    p_mesh.add_argument("--a", type=float, default=1.0)
    p_mesh.add_argument("--b", type=float, default=1.0)
    p_mesh.add_argument("--nx", type=int, default=16)
    p_mesh.add_argument("--ny", type=int, default=16)
    p_mesh.add_argument("--skew-deg", type=float, default=0.0, dest="skew_deg")
    p_mesh.add_argument("--r-over-a", type=float, default=0.0, dest="r_over_a")
    p_mesh.add_argument("--refinement", type=int, default=2)
    p_mesh.set_defaults(func=cmd_mesh_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    raise SystemExit(main())
