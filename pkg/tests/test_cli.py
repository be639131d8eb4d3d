import json
import math

import pytest

from thermnoise.cli import ScanRequest, default_config_path, execute, main
from thermnoise.model import load_config
from thermnoise.plotting import FigureError, emit_figure
from thermnoise.report import Table


def run_cli(tmp_path, capsys, *argv):
    code = main([*argv, "--out", str(tmp_path / "out")])
    return code, capsys.readouterr()


def read(tmp_path, suffix=".csv"):
    return Table.read_csv(tmp_path / f"out{suffix}") if suffix == ".csv" else (tmp_path / f"out{suffix}").read_bytes()


def test_magic_reports_two_roots(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "magic", "--stack", "fp-j16", "--zeta", "-1600")
    assert code == 0
    assert "2 roots" in io.out


def test_magic_row_count_matches_grid(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "stack-scan", "--stack", "fp-j4", "--zeta", "-1600", "--points", "2048")
    assert code == 0
    t = read(tmp_path)
    assert len(t) == 2048
    assert t.columns == ("k_over_k0", "delta_theta", "delta_beta", "delta_phi", "T")


def test_magic_without_roots(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "magic", "--stack", "fp-j1", "--zeta", "-1600")
    assert code == 0
    assert "0 roots" in io.out


def test_discriminate_without_roots(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "discriminate", "--stack-a", "fp-j1", "--stack-b", "fp-j4",
                       "--zeta", "-1600", "--format", "json")
    assert code == 0
    assert "no operating point" in io.out
    assert "no_magic_root" in json.loads(read(tmp_path, ".json"))["summary"]


def test_cancellation_exits_2(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "fdt-q", "--z1", "0", "--z2", "5", "--dz2", "1e-14")
    assert code == 2
    assert "numerical error" in io.err


def test_noise_ratio_alpha_zero(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "noise-ratio", "--alpha", "0", "--z2-max", "10")
    assert code == 0
    F = read(tmp_path).column("F")
    assert F and all(f == pytest.approx(1.0, abs=1e-12) for f in F)


def test_noise_ratio_default_curves(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "noise-ratio", "--points", "11", "--sigma", "0.2")
    assert code == 0
    t = read(tmp_path)
    assert list(dict.fromkeys(t.column("curve"))) == [1.5, 0.3, 1.0, 0.7, "min"]
    assert len(t) == 5 * 11


def test_noise_ratio_transverse_column(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "noise-ratio", "--alpha", "0.7", "--points", "5", "--transverse-coeff", "0.1")
    assert code == 0
    t = read(tmp_path)
    for F, Ft, z in zip(t.column("F"), t.column("F_transverse"), t.column("z2_over_w0")):
        assert Ft == pytest.approx(F + 0.1 * z, rel=1e-10, abs=1e-12)


def test_fdt_corr_surface(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "fdt-corr", "--z1", "0", "--z2", "0")
    assert code == 0
    assert "N = 1.000000" in io.out


def test_fdt_corr_grid(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "fdt-corr", "--z1", "0", "1", "--points", "7")
    assert code == 0
    t = read(tmp_path)
    assert len(t) == 14
    assert all(c <= 1 + 1e-12 for c in t.column("C"))


def test_fdt_q_scaled_column(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "fdt-q", "--z1", "1", "--points", "4")
    assert code == 0
    t = read(tmp_path)
    for q, qs, d in zip(t.column("Q"), t.column("Q_scaled"), t.column("dz2_over_w0")):
        assert qs == pytest.approx(q / math.sqrt(d), rel=1e-10)


def test_psd_column(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "psd", "--freq", "100", "200")
    assert code == 0
    S = read(tmp_path).column("S_q")
    assert S[0] == pytest.approx(2 * S[1], rel=1e-12)


def test_eigenmode_svg_skipped(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "eigenmode", "--format", "svg")
    assert code == 0
    assert "SVG skipped" in io.err
    assert not (tmp_path / "out.svg").exists()
    assert read(tmp_path).column("mode") == ["sapphire-2.22MHz"]


def test_unknown_stack_exits_1(tmp_path, capsys):
    code, io = run_cli(tmp_path, capsys, "stack-scan", "--stack", "nope", "--zeta", "-1600")
    assert code == 1
    assert "error" in io.err


def test_bad_config_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run_cli(tmp_path, capsys, "psd", "--config", str(bad))
    assert code == 1


def test_usage_error_exits_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["magic"])
    assert exc.value.code == 1


def test_json_summary(tmp_path, capsys):
    code, _ = run_cli(tmp_path, capsys, "magic", "--stack", "fp-j16", "--zeta", "-1600", "--format", "json")
    assert code == 0
    doc = json.loads(read(tmp_path, ".json"))
    assert set(doc) == {"summary", "columns", "rows"}
    assert len(doc["rows"]) == 4096


@pytest.mark.parametrize("argv", [
    ["magic", "--stack", "fp-j16", "--zeta", "-1600", "--points", "2048"],
    ["noise-ratio", "--points", "9"],
    ["fdt-q", "--points", "5"],
])
def test_outputs_byte_identical(tmp_path, capsys, argv):
    blobs = []
    for run in ("a", "b"):
        d = tmp_path / run
        assert main([*argv, "--format", "svg", "--out", str(d / "out")]) == 0
        blobs.append(((d / "out.csv").read_bytes(), (d / "out.svg").read_bytes()))
    assert blobs[0] == blobs[1]
    assert blobs[0][1].startswith(b"<?xml")


def test_execute_without_files():
    table, line = execute(ScanRequest("fdt-corr", {"z1": [0.0], "z2": 0.0}))
    assert len(table) == 1 and "N = 1.000000" in line


def test_emit_figure_empty(tmp_path):
    with pytest.raises(FigureError, match="empty"):
        emit_figure(Table(("f_hz", "S_q"), []), "psd", tmp_path / "x.svg")


def test_emit_figure_missing_columns(tmp_path):
    with pytest.raises(FigureError, match="columns"):
        emit_figure(Table(("f_hz",), [(1.0,)]), "psd", tmp_path / "x.svg")


def test_bundled_config_loads():
    cfg = load_config(default_config_path())
    assert "fp-j16" in cfg.stacks
