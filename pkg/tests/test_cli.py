import json

import pytest

from csnewton import cli


def run(argv):
    return cli.main(argv)


def read_rows(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


# ---------------------------------------------------------------------------
# grid parsing


def test_parse_harmonic_grid():
    grid = cli.parse_h_grid("harmonic", 4)
    assert grid == [2.0, 1.0, 2.0 / 3.0, 0.5]


def test_parse_geometric_grid():
    grid = cli.parse_h_grid("geometric:1e-3,1,4", 0)
    assert grid[0] == pytest.approx(1e-3) and grid[-1] == pytest.approx(1.0)
    assert len(grid) == 4


def test_parse_list_grid():
    assert cli.parse_h_grid("list:0.5,0.25", 0) == [0.5, 0.25]
    assert cli.parse_h_grid("0.5, 0.25", 0) == [0.5, 0.25]


@pytest.mark.parametrize("spec", ["", "list:", "geometric:1,2", "0.1,-0.5", "abc"])
def test_parse_bad_grids(spec):
    with pytest.raises(cli.UsageError):
        cli.parse_h_grid(spec, 10)


# ---------------------------------------------------------------------------
# rate-scan


def test_rate_scan_scalar(tmp_path):
    out = tmp_path / "scan.csv"
    code = run(["rate-scan", "--variant", "scalar", "--h-grid",
                "list:1e-6,1e-4", "--out", str(out)])
    assert code == 0
    header, rows = read_rows(out)
    assert header == ["h", "iterations", "final_error", "rate_estimate", "failed"]
    assert len(rows) == 2
    for row in rows:
        assert row[-1] == "0"
        assert float(row[2]) <= 1e-14
        assert 1.8 <= float(row[3]) <= 2.2
    manifest = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    assert manifest["command"] == "rate-scan"
    assert manifest["outputs"] == [str(out)]
    assert manifest["config"]["variant"] == "scalar"


def test_rate_scan_jfnk_has_inner_column(tmp_path):
    out = tmp_path / "scan.csv"
    code = run(["rate-scan", "--variant", "jfnk", "--h-grid", "list:1e-2",
                "--out", str(out)])
    assert code == 0
    header, rows = read_rows(out)
    assert "inner_iteration_total" in header
    assert int(rows[0][4]) >= 1


def test_rate_scan_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["rate-scan", "--variant", "jacobian", "--h-grid", "list:1e-3,0.1"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_rate_scan_workers_match_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["rate-scan", "--variant", "scalar", "--h-grid", "list:1e-6,1e-4,1e-2"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_rate_scan_csv_has_17_digit_floats(tmp_path):
    out = tmp_path / "scan.csv"
    run(["rate-scan", "--variant", "scalar", "--h-grid", "list:0.6666666666666666",
         "--out", str(out)])
    _, rows = read_rows(out)
    assert float(rows[0][0]) == 2.0 / 3.0  # round-trip exact


def test_rate_scan_usage_errors():
    assert run(["rate-scan", "--variant", "scalar", "--h-grid", "list:"]) == 2
    assert run(["rate-scan", "--variant", "scalar", "--x0", "1,2"]) == 2
    assert run(["rate-scan", "--variant", "jfnk", "--problem", "nope"]) == 2


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nvariant = scalar\nh-grid = list:1e-2\n"
                   f"out = {tmp_path / 'from_file.csv'}\n")
    out = tmp_path / "flag_wins.csv"
    code = run(["rate-scan", "--config", str(cfg), "--out", str(out)])
    assert code == 0
    assert out.exists() and not (tmp_path / "from_file.csv").exists()
    header, rows = read_rows(out)
    assert len(rows) == 1 and float(rows[0][0]) == pytest.approx(1e-2)


def test_missing_config_file_is_usage_error(tmp_path):
    assert run(["rate-scan", "--variant", "scalar",
                "--config", str(tmp_path / "nope.cfg")]) == 2


def test_bad_config_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("this is not key value\n")
    assert run(["rate-scan", "--variant", "scalar", "--config", str(cfg)]) == 2


# ---------------------------------------------------------------------------
# ode


def test_ode_stiff_outputs(tmp_path):
    out = tmp_path / "stiff"
    code = run(["ode", "--problem", "stiff", "--t-end", "0.2", "--out", str(out)])
    assert code == 0
    header, rows = read_rows(tmp_path / "stiff_trajectory.csv")
    assert header == ["t", "y0"]
    assert len(rows) == 21
    assert float(rows[0][1]) == 0.0
    iter_header, iter_rows = read_rows(tmp_path / "stiff_iterations.csv")
    assert iter_header == ["step", "newton_iters", "max_gmres_iters"]
    assert len(iter_rows) == 20
    assert all(1 <= int(r[1]) <= 3 for r in iter_rows)
    manifest = json.loads((tmp_path / "stiff.manifest.json").read_text())
    assert manifest["command"] == "ode"
    assert len(manifest["outputs"]) == 2


def test_ode_olsen_short(tmp_path):
    out = tmp_path / "olsen"
    code = run(["ode", "--problem", "olsen", "--t-end", "0.1", "--out", str(out)])
    assert code == 0
    header, rows = read_rows(tmp_path / "olsen_trajectory.csv")
    assert header == ["t", "y0", "y1", "y2", "y3"]
    assert [float(v) for v in rows[0][1:]] == [1.0, 1.0, 1.0, 1.0]


def test_ode_usage_errors():
    assert run(["ode", "--problem", "stiff", "--dt", "-1"]) == 2
    assert run(["ode", "--problem", "stiff", "--t-end", "0"]) == 2


# ---------------------------------------------------------------------------
# dnls


def test_dnls_ground_small_lattice(tmp_path):
    out = tmp_path / "gs"
    code = run(["dnls", "--mode", "ground", "--N", "31", "--out", str(out)])
    assert code == 0
    header, rows = read_rows(tmp_path / "gs_state.csv")
    assert header == ["n", "x", "y"]
    assert len(rows) == 31
    inv_header, inv_rows = read_rows(tmp_path / "gs_invariants.csv")
    assert inv_header == ["P", "H", "newton_iterations"]
    assert float(inv_rows[0][0]) > 1e-3  # not the trivial root
    manifest = json.loads((tmp_path / "gs.manifest.json").read_text())
    assert manifest["config"]["N"] == 31


def test_dnls_evolve_small_lattice(tmp_path):
    out = tmp_path / "ev"
    code = run(["dnls", "--mode", "evolve", "--N", "31", "--t-end", "1.0",
                "--out", str(out)])
    assert code == 0
    header, rows = read_rows(tmp_path / "ev_conservation.csv")
    assert header == ["t", "P", "H", "abs_dP", "abs_dH"]
    assert len(rows) == 11
    assert all(float(r[3]) <= 1e-10 for r in rows)
    assert (tmp_path / "ev_final_state.csv").exists()


def test_dnls_usage_errors():
    assert run(["dnls", "--mode", "ground", "--N", "0"]) == 2
    assert run(["dnls", "--mode", "evolve", "--dt", "0"]) == 2


def test_unwritable_output_is_reported(tmp_path):
    out = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert run(["rate-scan", "--variant", "scalar", "--h-grid", "list:1e-6",
                "--out", str(out)]) == 2
