#!/usr/bin/env python3
"""
Tests for the command line: layering, outputs and exit codes.
"""

import json
import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, file_section, layered, main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("SPDECP_OUTPUT_DIR", "SPDECP_VERBOSE", "SPDECP_DATABASE_URL",
                 "SPDECP_ENABLE_DATABASE_STORAGE", "SPDECP_MODE_FACTOR", "SPDECP_TIME_FACTOR"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("SPDECP_THREADS", "1")


def test_layering_order():
    defaults = dict(a=1, b=2, c=3, d=4)
    merged = layered(dict(a=10, b=None, z=0), dict(b=20, c=30), dict(c=300, d=400, y=0), defaults)
    assert merged == dict(a=10, b=20, c=30, d=400)
    section = file_section({"seed": 3, "theta-minus": 1.0, "spectrum": {"modes": 4}, "toy": {"n": 5}}, "spectrum")
    assert section == {"seed": 3, "theta_minus": 1.0, "modes": 4}


def test_spectrum_constant_profile(tmp_path, capsys):
    print("🔍 Testing `spectrum` on a constant profile")
    code = main(["spectrum", "--theta-minus", "1", "--theta-plus", "1", "--tau", "0.5",
                 "--modes", "3", "--out-dir", str(tmp_path)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    values = [float(line.split()[1]) for line in out.splitlines() if line.startswith("  ")]
    assert values == pytest.approx([math.pi**2, 4 * math.pi**2, 9 * math.pi**2], rel=1e-9)

    payload = json.loads((tmp_path / "spectrum.json").read_text())
    assert list(payload) == ["config", "eigenvalues", "comparison_bounds"]
    assert payload["eigenvalues"] == values
    print("✓ π², 4π², 9π² printed")


def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / "cfg.toml"
    config.write_text("[spectrum]\ntheta_minus = 1.0\ntheta_plus = 2.0\ntau = 0.35\nmodes = 4\n")
    assert main(["spectrum", "--config", str(config), "--out-dir", str(tmp_path)]) == EXIT_OK
    assert len(json.loads((tmp_path / "spectrum.json").read_text())["eigenvalues"]) == 4
    assert main(["spectrum", "--config", str(config), "--modes", "2", "--out-dir", str(tmp_path)]) == EXIT_OK
    assert len(json.loads((tmp_path / "spectrum.json").read_text())["eigenvalues"]) == 2


def test_usage_errors_exit_with_one(tmp_path, capsys):
    assert main(["spectrum", "--theta-minus", "1", "--out-dir", str(tmp_path)]) == EXIT_USAGE
    assert "--theta-plus" in capsys.readouterr().err
    assert main(["no-such-command"]) == EXIT_USAGE
    assert main(["spectrum", "--modes", "many"]) == EXIT_USAGE
    assert main(["spectrum", "--theta-minus", "1", "--theta-plus", "2", "--tau", "1.5",
                 "--out-dir", str(tmp_path)]) == EXIT_USAGE
    assert main(["spectrum", "--config", str(tmp_path / "missing.toml")]) == EXIT_USAGE
    assert main(["estimate", "--out-dir", str(tmp_path)]) == EXIT_USAGE


def test_runtime_errors_exit_with_two(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("not an observation dump\n")
    assert main(["estimate", "--input", str(bad), "--out-dir", str(tmp_path)]) == EXIT_RUNTIME
    assert main(["estimate", "--input", str(tmp_path / "absent.csv"), "--out-dir", str(tmp_path)]) == EXIT_RUNTIME


def test_simulate_then_estimate(tmp_path):
    print("🔍 Testing `simulate` followed by `estimate`")
    args = ["simulate", "--theta-minus", "1", "--theta-plus", "2", "--tau", "0.35", "--n", "5", "--seed", "3"]
    assert main(args + ["--out-dir", str(tmp_path / "a"), "--functionals", str(tmp_path / "a" / "f.csv")]) == EXIT_OK
    assert main(args + ["--out-dir", str(tmp_path / "b")]) == EXIT_OK
    dump = tmp_path / "a" / "observations.csv"
    assert dump.read_bytes() == (tmp_path / "b" / "observations.csv").read_bytes()
    assert (tmp_path / "a" / "f.csv").read_text().startswith("# config: ")

    assert main(["estimate", "--input", str(dump), "--out-dir", str(tmp_path)]) == EXIT_OK
    result = json.loads((tmp_path / "estimate.json").read_text())
    assert result["config"]["method"] == "simultaneous"
    assert 1 <= result["k_hat"] <= 5
    assert result["config"]["band"] == [0.5, 4.0]
    assert 0.5 <= result["theta_minus_hat"] <= 4.0
    header = dump.read_text().splitlines()[1].split(",")
    assert "D1" in header and "dB1" in header

    bare = tmp_path / "c"
    assert main(args + ["--out-dir", str(bare), "--no-brownian"]) == EXIT_OK
    assert "dB1" not in (bare / "observations.csv").read_text().splitlines()[1].split(",")

    out = tmp_path / "cusum.json"
    assert main(["estimate", "--input", str(dump), "--method", "cusum", "--out", str(out)]) == EXIT_OK
    assert len(json.loads(out.read_text())["objective"]) == 5
    print("✓ Dumps are byte-identical and estimates were written")


def test_toy_and_limit_law(tmp_path):
    args = ["toy", "--theta-minus", "1", "--theta-plus", "1.5", "--tau", "0.35", "--n", "10",
            "--grid-points", "2000", "--replicates", "60", "--oracle-replicates", "200", "--out-dir", str(tmp_path)]
    assert main(args) == EXIT_OK
    lines = (tmp_path / "toy_errors.csv").read_text().splitlines()
    assert lines[1] == "rep,tau_hat,rescaled_error"
    assert len(lines) == 62
    summary = json.loads((tmp_path / "toy_errors.json").read_text())
    assert 0.0 <= summary["ks_to_limit"] <= 1.0
    assert 0.0 <= summary["ks_to_oracle"] <= 1.0

    assert main(["limit-law", "--replicates", "20", "--seed", "4", "--out-dir", str(tmp_path)]) == EXIT_OK
    samples = (tmp_path / "argmin_samples.csv").read_text().splitlines()
    assert samples[1] == "rep,argmin,closed_form_cdf"
    assert len(samples) == 22
    assert main(["limit-law", "--step", "0.5", "--out-dir", str(tmp_path)]) == EXIT_USAGE


def test_mc_rates_with_seed_override(tmp_path):
    print("🔍 Testing `mc-rates` on a toy plan")
    plan = tmp_path / "plan.toml"
    plan.write_text(
        'n_values = [10, 20, 40]\nreplicates = 50\nvariant = "toy"\nseed = 1\ntoy_grid_points = 20000\n'
        "[profile]\ntheta_minus = 1.0\ntheta_plus = 1.5\ntau = 0.35\n"
    )
    report_path = tmp_path / "report.json"
    args = ["mc-rates", "--plan", str(plan), "--seed", "8", "--out", str(report_path)]
    assert main(args) == EXIT_OK
    report = json.loads(report_path.read_text())
    assert report["plan"]["seed"] == 8
    assert [s["n"] for s in report["sizes"]] == [10, 20, 40]
    first = report_path.read_bytes()
    csv_bytes = (tmp_path / "report.csv").read_bytes()

    assert main(args) == EXIT_OK
    assert report_path.read_bytes() == first
    assert (tmp_path / "report.csv").read_bytes() == csv_bytes

    assert main(["mc-rates", "--plan", str(tmp_path / "nope.toml")]) == EXIT_USAGE
    print("✓ Report is reproducible and honours --seed")


if __name__ == "__main__":
    print("Run with pytest: the CLI tests rely on tmp_path, capsys and monkeypatch fixtures.")
    sys.exit(pytest.main([__file__, "-v"]))
