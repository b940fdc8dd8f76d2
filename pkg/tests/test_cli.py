"""CLI tests: config grammar, batch runs, table mode, mesh export."""

import csv

import pytest

from fgmflutter.cli import (RESULT_FIELDS, TABLE_IDS, UsageError,
                            load_benchmarks, main, parse_config)


def write_config(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# configuration grammar
# ---------------------------------------------------------------------------

def test_parse_config_lists_and_pairs(tmp_path):
    path = write_config(tmp_path, """
# comment line
n = 0, 1, 5
T = 300/300, 600/300
nx = 12
ny = 12
damped = both
""")
    cfg = parse_config(path)
    assert cfg.n_list == [0.0, 1.0, 5.0]
    assert cfg.temps == [(300.0, 300.0), (600.0, 300.0)]
    assert cfg.damped == [False, True]
    cases = list(cfg.cases())
    assert len(cases) == 3 * 2 * 2
    case, damped = cases[0]
    assert case.nx == 12 and damped is False


def test_parse_config_rejects_bad_input(tmp_path):
    with pytest.raises(UsageError, match="empty gradient-index"):
        parse_config(write_config(tmp_path, "n = \n"))
    with pytest.raises(UsageError, match="unknown key"):
        parse_config(write_config(tmp_path, "gamma = 3\n"))
    with pytest.raises(UsageError, match="Tc/Tm"):
        parse_config(write_config(tmp_path, "T = 300\n"))
    with pytest.raises(UsageError, match="boundary"):
        parse_config(write_config(tmp_path, "bc = SFSF\n"))


def test_parse_config_overrides():
    cfg = parse_config(None, overrides=("nx=8", "ny=8", "n=2"))
    assert cfg.nx == 8
    assert cfg.n_list == [2.0]


# ---------------------------------------------------------------------------
# run subcommand
# ---------------------------------------------------------------------------

def test_run_writes_self_describing_csv(tmp_path):
    cfg = write_config(tmp_path, """
n = 0
nx = 8
ny = 8
lambda_max = 1000
steps = 120
""")
    out = tmp_path / "out"
    rc = main(["run", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    with open(out / "results.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert set(rows[0]) == set(RESULT_FIELDS)
    assert rows[0]["bc"] == "SSSS"
    assert float(rows[0]["lambda_cr"]) > 0
    assert (out / "report.txt").exists()


def test_run_outputs_are_deterministic(tmp_path):
    cfg = write_config(tmp_path, "n = 0\nnx = 8\nny = 8\nsteps = 100\n")
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    main(["run", "--config", str(cfg), "--out", str(out1)])
    main(["run", "--config", str(cfg), "--out", str(out2)])
    assert (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()
    assert (out1 / "report.txt").read_bytes() == (out2 / "report.txt").read_bytes()


def test_run_branch_traces(tmp_path):
    cfg = write_config(tmp_path, "n = 0\nnx = 8\nny = 8\nsteps = 100\n")
    out = tmp_path / "out"
    rc = main(["run", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    trace = out / "branches_000.csv"
    assert trace.exists()
    header = trace.read_text().splitlines()[0]
    assert header == "lambda,mode_index,re_kappa,im_kappa"
    # opting out suppresses the trace files
    out2 = tmp_path / "out2"
    main(["run", "--config", str(cfg), "--out", str(out2), "--no-traces"])
    assert not (out2 / "branches_000.csv").exists()


def test_run_records_row_failure_and_nonzero_exit(tmp_path):
    # unknown material: the row fails but the batch completes
    cfg = write_config(tmp_path, "n = 0\nmaterial = Unobtanium/SUS304\n")
    out = tmp_path / "out"
    rc = main(["run", "--config", str(cfg), "--out", str(out)])
    assert rc == 1
    with open(out / "results.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert "Unobtanium" in rows[0]["error"] or rows[0]["error"]


# ---------------------------------------------------------------------------
# table subcommand
# ---------------------------------------------------------------------------

def test_benchmark_data_complete():
    for table_id in TABLE_IDS:
        rows = load_benchmarks(table_id)
        assert rows, table_id
    all_rows = load_benchmarks()
    suspects = [r for r in all_rows if r["suspect"]]
    assert len(suspects) == 2
    tables = {r["table"] for r in suspects}
    assert tables == {"skew", "boundary"}
    for r in suspects:
        assert r["note"]


def test_table_mode_validation_quick(tmp_path):
    rc = main(["table", "validation", "--quick", "--out", str(tmp_path)])
    assert rc == 0
    with open(tmp_path / "table_validation.csv", newline="",
              encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    for row in rows:
        assert row["lambda_ref"]
        assert abs(float(row["lambda_dev_pct"])) < 5.0   # coarse-mesh bias
    report = (tmp_path / "table_validation.txt").read_text()
    assert "mean |deviation|" in report


def test_table_mode_flags_suspected_misprints(tmp_path):
    # the boundary study carries one out-of-pattern reference row which must
    # be listed and excluded rather than failing the comparison
    rows = load_benchmarks("boundary")
    suspect = [r for r in rows if r["suspect"]]
    assert len(suspect) == 1
    assert suspect[0]["lambda_ref"] == 57.0313
    assert "757.0313" in suspect[0]["note"]


def test_table_unknown_id_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["table", "nosuchtable", "--out", str(tmp_path)])
    assert err.value.code == 2


# ---------------------------------------------------------------------------
# mesh-export subcommand
# ---------------------------------------------------------------------------

def test_mesh_export_roundtrip(tmp_path):
    from fgmflutter import load_mesh
    out = tmp_path / "mesh.txt"
    rc = main(["mesh-export", "--out", str(out), "--nx", "5", "--ny", "4"])
    assert rc == 0
    mesh = load_mesh(out)
    assert mesh.n_nodes == 30
    rc = main(["mesh-export", "--out", str(out), "--r-over-a", "0.2",
               "--refinement", "2"])
    assert rc == 0
    mesh = load_mesh(out)
    assert len(mesh.tagged("hole")) == 32
