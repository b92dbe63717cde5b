import csv
import io
import json

import pytest

from wrightcap import cli
from wrightcap.manifold import ResonantIndex
from wrightcap.seq import read_csv


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eigs_dde_only(capsys):
    code, out, _ = _run(capsys, "eigs", "--alpha", "2")
    assert code == cli.EXIT_OK
    data = json.loads(out)
    lo, hi = (float(v) for v in data["lambda_dde"]["plus"]["re"])
    assert lo <= 0.172816002840 <= hi
    assert "roots_psa" not in data


def test_eigs_census_n1_reports_zero_unstable(capsys):
    code, out, _ = _run(capsys, "eigs", "--n", "1")
    assert code == cli.EXIT_OK
    data = json.loads(out)
    assert data["unstable_psa"] == 0 and len(data["roots_psa"]) == 2


def test_eigs_census_n10_writes_file(capsys, tmp_path):
    path = tmp_path / "eigs.json"
    code, out, _ = _run(capsys, "eigs", "--n", "10", "--out", str(path))
    assert code == cli.EXIT_OK
    assert json.loads(path.read_text()) == json.loads(out)
    assert json.loads(out)["unstable_psa"] == 2


@pytest.mark.parametrize("argv", [
    ["eigs", "--alpha", "1.0"],
    ["validate", "dde", "--trunc", "1"],
    ["validate", "psa", "--tail-m", "20"],
    ["validate", "psa", "--norm", "inf", "--xi-scale", "-1"],
    ["coeffs", "--n", "0"],
])
def test_config_errors(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == cli.EXIT_CONFIG and "error" in err


def test_census_failure_code(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, err = _run(capsys, "validate", "psa", "--n", "1", "--trunc", "4", "--tail-m", "100",
                          "--out", str(path))
    assert code == cli.EXIT_CENSUS
    assert not path.exists()
    checks = json.loads(out)["checks"]
    assert checks[-1]["name"] == "psa_census" and not checks[-1]["passed"]
    assert "[FAIL] psa_census" in err


def test_sweep_failure_code(capsys):
    code, _, _ = _run(capsys, "validate", "psa", "--trunc", "4", "--tail-m", "30")
    assert code == cli.EXIT_SWEEP


def test_radii_failure_code(capsys):
    code, out, _ = _run(capsys, "validate", "dde", "--trunc", "6", "--xi-scale", "5")
    assert code == cli.EXIT_RADII
    assert json.loads(out)["checks"][-1]["name"] == "radii_dde"


def test_resonance_failure_code(capsys, monkeypatch):
    def boom(p, upto):
        raise ResonantIndex("beta = (2, 0)")

    monkeypatch.setattr(cli, "check_nonresonance", boom)
    code, _, err = _run(capsys, "validate", "dde", "--trunc", "4")
    assert code == cli.EXIT_RESONANCE
    code, _, _ = _run(capsys, "coeffs", "--kind", "dde", "--trunc", "4")
    assert code == cli.EXIT_RESONANCE


def test_validate_dde_small(capsys, tmp_path):
    path = tmp_path / "dde.json"
    code, out, _ = _run(capsys, "validate", "dde", "--trunc", "6", "--tail-m", "7", "--out", str(path))
    assert code == cli.EXIT_OK
    data = json.loads(path.read_text())
    assert float(data["r_dde"]) < 1e-6
    assert all(c["passed"] for c in data["checks"])


def test_coeffs_to_stdout_and_file(capsys, tmp_path):
    code, out, err = _run(capsys, "coeffs", "--trunc", "5")
    assert code == cli.EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["beta1", "beta2", "re_lo", "re_hi", "im_lo", "im_hi"]
    assert len(rows) == 1 + 21
    assert err.startswith("sha256 ")
    path = tmp_path / "x.csv"
    assert _run(capsys, "coeffs", "--trunc", "5", "--out", str(path))[0] == cli.EXIT_OK
    assert path.read_text() == out
    x = read_csv(path)
    assert x[(1, 0)].contains(0.03)


def test_unknown_subcommand_is_an_argparse_error():
    with pytest.raises(SystemExit):
        cli.main(["bogus"])
