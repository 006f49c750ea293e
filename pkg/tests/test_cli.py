import csv
import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from orbizeta import cli
from orbizeta.errors import DiscretenessWarning
from orbizeta.geodesics import load_spectrum, spectrum_to_json
from orbizeta.verify import report_from_json

DEMO_DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


@pytest.fixture
def data_dir(tmp_path):
    for p in DEMO_DATA.glob("*.json"):
        shutil.copy(p, tmp_path / p.name)
    return tmp_path


def _write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


# --------------------------------------------------------------------------
# parsing helpers


@pytest.mark.parametrize("text, z", [("3", 3), ("2.5+1i", 2.5 + 1j), ("1-2j", 1 - 2j), ("-0.5i", -0.5j)])
def test_parse_complex(text, z):
    assert cli.parse_complex(text) == z


def test_fmt_float_round_trips():
    for x in (0.1, 1 / 3, 2.4995616e-300, -7.0):
        assert float(cli.fmt_float(x)) == x
    assert cli.fmt_float(float("nan")) == "nan"


# --------------------------------------------------------------------------
# commands


def test_info_table(tmp_path, capsys):
    cfg = _write(tmp_path, {"signature": {"genus": 0, "elliptic_orders": [2, 3, 7]}})
    code, out, _ = _run(capsys, "info", "--config", cfg)
    assert code == 0
    rows = _csv_rows(out)
    assert len(rows) == 2 + 3 + 7
    assert "# chi=-1/42" in out


def test_factors_deterministic_bytes(tmp_path, capsys):
    cfg = _write(tmp_path, {"signature": {"genus": 2}, "s_grid": [2, "3+1i", 5]})
    outs = []
    for k in range(2):
        path = tmp_path / f"f{k}.csv"
        assert cli.main(["factors", "--config", cfg, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_threads_do_not_change_output(tmp_path, capsys, monkeypatch):
    cfg = _write(tmp_path, {"signature": {"genus": 0, "elliptic_orders": [2, 3, 7]}, "s_grid": [2, 3, 4, 6]})
    monkeypatch.setenv("ORBIZETA_THREADS", "1")
    _, one, _ = _run(capsys, "factors", "--config", cfg)
    monkeypatch.setenv("ORBIZETA_THREADS", "4")
    _, four, _ = _run(capsys, "factors", "--config", cfg)
    assert one == four


def test_bad_threads_env(tmp_path, capsys, monkeypatch):
    cfg = _write(tmp_path, {"signature": {"genus": 2}, "s_grid": [2]})
    monkeypatch.setenv("ORBIZETA_THREADS", "many")
    code, _, err = _run(capsys, "factors", "--config", cfg)
    assert code == 2 and err.startswith("orbizeta: error: ConfigError")


def test_factors_json_and_pole_row(tmp_path, capsys):
    cfg = _write(tmp_path, {"signature": {"genus": 2}, "s_grid": [3, 0.5]})
    code, out, _ = _run(capsys, "factors", "--config", cfg, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"] == cli.FACTOR_COLUMNS
    ok, bad = doc["rows"]
    assert ok["error"] is None and ok["log_det_re"] is not None
    assert bad["error"] and bad["log_det_re"] is None


def test_factors_at_one_row(tmp_path, capsys):
    cfg = _write(tmp_path, {"signature": {"genus": 2}, "s_grid": [3]})
    code, out, _ = _run(capsys, "factors", "--config", cfg, "--at-one", "--m-rho", "1")
    assert code == 0
    assert "det* at s=1" in out
    assert _csv_rows(out)[-1]["s_re"] == "1"
    code, _, err = _run(capsys, "factors", "--config", cfg, "--at-one")
    assert code == 2


def test_factors_with_spectrum_file(tmp_path, capsys):
    spec = {"l_max": 3.0, "records": [{"length": 2.0, "primitive_length": 2.0, "class_count": 2}]}
    (tmp_path / "spec.json").write_text(json.dumps(spec))
    cfg = _write(tmp_path, {"signature": {"genus": 2}, "spectrum": {"path": "spec.json"}, "s_grid": [3]})
    code, out, _ = _run(capsys, "factors", "--config", cfg)
    assert code == 0
    row = _csv_rows(out)[0]
    assert float(row["log_z_re"]) != 0.0


def test_verify_passes_and_report_round_trip(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, err = _run(capsys, "verify", "--out", str(out))
    assert code == 0, err
    report = report_from_json(out.read_text())
    assert report.passed and len(report.checks) == 12
    assert report.to_json() == out.read_text()


def test_verify_detects_zeta_shift(tmp_path, capsys):
    code, _, err = _run(capsys, "verify", "--zeta1-shift", "1e-6", "--out", str(tmp_path / "r.json"))
    assert code == 1
    assert "check failed" in err


def test_spectrum_command_round_trip(data_dir, capsys):
    cfg = _write(data_dir, {"spectrum": {"generate": {"group": "octagon_group.json", "l_max": 5.0}}})
    out = data_dir / "spec.json"
    with pytest.warns(DiscretenessWarning):
        code, table, _ = _run(capsys, "spectrum", "--config", cfg, "--out", str(out))
    assert code == 0
    assert "# audit=passed" in table
    first = out.read_text()
    assert spectrum_to_json(load_spectrum(out)) == first
    cfg2 = _write(data_dir, {"spectrum": {"path": "spec.json"}}, "cfg2.json")
    out2 = data_dir / "spec2.json"
    assert cli.main(["spectrum", "--config", cfg2, "--out", str(out2)]) == 0
    assert out2.read_bytes() == out.read_bytes()


def test_warning_line_format_in_subprocess(data_dir):
    cfg = _write(data_dir, {"spectrum": {"generate": {"group": "octagon_group.json", "l_max": 5.0}}})
    proc = subprocess.run([sys.executable, "-m", "orbizeta.cli", "spectrum", "--config", cfg,
                           "--out", str(data_dir / "s.json")], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stderr.startswith("orbizeta: warning: DiscretenessWarning: ")


def test_spectrum_needs_out(data_dir, capsys):
    cfg = _write(data_dir, {"spectrum": {"path": "nonexistent.json"}})
    code, _, _ = _run(capsys, "spectrum", "--config", cfg)
    assert code in (2, 4)


def test_torsion_yamaguchi_table(data_dir, capsys):
    code, out, _ = _run(capsys, "torsion", "--config", str(data_dir / "yamaguchi_237.json"))
    assert code == 0
    rows = _csv_rows(out)
    assert [int(r["N"]) for r in rows] == list(range(1, 7))
    for r in rows:
        assert abs(float(r["closed_minus_definition"])) < 1e-8


def test_torsion_genus2_trivial(tmp_path, capsys):
    cfg = _write(tmp_path, {"signature": {"genus": 2}})
    code, out, _ = _run(capsys, "torsion", "--config", cfg)
    assert code == 0
    assert float(_csv_rows(out)[0]["C_definition"]) == pytest.approx(2.4995616, abs=1e-7)


# --------------------------------------------------------------------------
# exit codes


@pytest.mark.parametrize("doc", [
    {"signature": {"genus": 2}, "colour": 1},
    {"signature": {"genus": 1}},
    {"signature": {"genus": 0, "elliptic_orders": [2, 3, 7]},
     "representation": {"dim": 1, "m": "2", "elliptic_angles": [[0], [0], [0]]}},
    {"signature": {"genus": 2}, "representation": {"dim": 1, "m": "1/3x"}},
])
def test_config_errors_exit_2(tmp_path, capsys, doc):
    cfg = _write(tmp_path, doc)
    code, _, err = _run(capsys, "info", "--config", cfg)
    assert code == 2
    assert err.startswith("orbizeta: error: ") and err.count("\n") == 1


def test_invalid_json_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{")
    assert _run(capsys, "info", "--config", str(p))[0] == 2


def test_missing_signature_exit_2(capsys):
    assert _run(capsys, "info")[0] == 2


def test_bad_flags_exit_2(tmp_path, capsys):
    cfg = _write(tmp_path, {"signature": {"genus": 2}})
    assert _run(capsys, "verify", "--tol", "0")[0] == 2
    assert _run(capsys, "factors", "--config", cfg, "--audit", "0")[0] == 2


def test_audit_failure_exit_3(data_dir, capsys, monkeypatch):
    real = cli.generate_spectrum

    def shallow(*a, **kw):
        return real(*a, max_depth=3, **kw)
    monkeypatch.setattr(cli, "generate_spectrum", shallow)
    cfg = _write(data_dir, {"signature": {"genus": 2}, "s_grid": [3],
                            "spectrum": {"generate": {"group": "octagon_group.json", "l_max": 6.0}}})
    code, _, err = _run(capsys, "factors", "--config", cfg)
    assert code == 3 and "AuditFailure" in err


def test_numerical_error_exit_4(tmp_path, capsys, monkeypatch):
    def boom(*a, **kw):
        raise ArithmeticError("synthetic failure")
    monkeypatch.setattr(cli.zf, "torsion_factor", boom)
    cfg = _write(tmp_path, {"signature": {"genus": 2}})
    code, _, err = _run(capsys, "torsion", "--config", cfg)
    assert code == 4 and "synthetic failure" in err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("orbizeta ")
