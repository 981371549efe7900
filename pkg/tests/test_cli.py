import contextlib
import io
import json

import pytest

from smoothlab.cli import build_parser, run
from smoothlab.experiments import read_ft_csv, read_scan_csv, write_scan_csv


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def test_psi_golden():
    code, out, _ = invoke(["psi", "--x", "10", "--y", "3"])
    assert code == 0
    assert out == "psi=7\n"


def test_rho_golden():
    code, out, _ = invoke(["rho", "--u", "2"])
    assert code == 0
    assert out == "rho=0.306852819440\n"


def test_tsum_golden():
    code, out, _ = invoke(["tsum", "--x", "10", "--y", "3", "--a", "1"])
    assert code == 0
    assert out == "t=4.32380952381 ratio=0.617687074830\n"


def test_tsum_with_split():
    code, out, _ = invoke(["tsum", "--x", "10", "--y", "3", "--a", "1", "--delta", "2"])
    assert code == 0
    fields = dict(kv.split("=") for kv in out.split())
    assert fields["sigma1"] == "5.00000000000"
    assert float(fields["sigma2"]) == pytest.approx(-71 / 105, abs=1e-11)
    assert fields["total"] == fields["t"]


def test_vsum():
    code, out, _ = invoke(["vsum", "--x", "10", "--y", "3", "--a", "1"])
    assert code == 0
    fields = dict(kv.split("=") for kv in out.split())
    assert float(fields["v"]) == pytest.approx(18 / 7, rel=1e-11)
    assert float(fields["v_main"]) == pytest.approx(3.0396355093, abs=1e-9)


def test_domain_error_exit_code():
    code, out, err = invoke(["tsum", "--x", "10", "--y", "3", "--a", "0"])
    assert code == 1
    assert out == ""
    assert "error:" in err


def test_usage_error_exit_code():
    code, _, err = invoke(["psi", "--x", "10"])  # missing --y
    assert code == 2
    code, _, err = invoke(["psi", "--x", "10", "--y", "3", "--bogus", "1"])
    assert code == 2
    code, _, _ = invoke(["unknowncmd"])
    assert code == 2


def test_help_lists_documented_flags():
    for cmd, flags in [
        ("psi", ["--x", "--y"]),
        ("rho", ["--u", "--h"]),
        ("tsum", ["--x", "--y", "--a", "--delta"]),
        ("vsum", ["--x", "--y", "--a"]),
        ("scan", ["--config", "--out"]),
        ("discrepancy", ["--x", "--y", "--delta", "--z-mode", "--out"]),
        ("ftratio", ["--x", "--y", "--d-list", "--out"]),
    ]:
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            with pytest.raises(SystemExit) as exc:
                build_parser().parse_args([cmd, "--help"])
        assert exc.value.code == 0
        text = out.getvalue()
        for flag in flags:
            assert flag in text, (cmd, flag)


def test_scan_csv_round_trip(tmp_path):
    cfg = tmp_path / "cfg.txt"
    out_csv = tmp_path / "scan.csv"
    cfg.write_text("x_grid = 10, 100\ny = 3\na_list = 1, -1\n")
    code, out, _ = invoke(["scan", "--config", str(cfg), "--out", str(out_csv)])
    assert code == 0
    assert f"out={out_csv}" in out
    assert "rows=4" in out and "failed=0" in out
    records = read_scan_csv(out_csv)
    assert len(records) == 4
    rewritten = tmp_path / "rewrite.csv"
    write_scan_csv(rewritten, records)
    assert rewritten.read_text() == out_csv.read_text()


def test_scan_uses_config_out(tmp_path):
    out_csv = tmp_path / "from_config.csv"
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(f"x_grid = 10\ny = 3\na_list = 1\nout = {out_csv}\n")
    code, out, _ = invoke(["scan", "--config", str(cfg)])
    assert code == 0
    assert out_csv.exists()


def test_discrepancy_json(tmp_path):
    report = tmp_path / "disc.json"
    code, out, _ = invoke(
        ["discrepancy", "--x", "10", "--y", "3", "--delta", "2", "--out", str(report)]
    )
    assert code == 0
    assert "total=0.00000000000" in out
    payload = json.loads(report.read_text())
    assert set(payload) == {"config", "rows", "goldens"}
    assert payload["rows"] == [[1, 0.0], [2, 0.0]]


def test_ftratio_output(tmp_path):
    out_csv = tmp_path / "ft.csv"
    code, out, _ = invoke(
        ["ftratio", "--x", "10", "--y", "3", "--d-list", "2,1", "--out", str(out_csv)]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("d=1 ratio=1.00000000000")
    assert lines[1].startswith("d=2 ratio=0.857142857143")
    rows = read_ft_csv(out_csv)
    assert [r.d for r in rows] == [1, 2]
