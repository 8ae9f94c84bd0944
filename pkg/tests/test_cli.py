import json
import math
import os

import pytest

from digonbound import cli

PI = math.pi


def run(capsys, *argv):
    status = cli.main(list(argv))
    return status, capsys.readouterr().out


class TestConfigCommand:
    def test_symmetric_pair(self, capsys):
        status, out = run(
            capsys, "config", "--theta", "0,3.14159265358979", "--alpha", "0.5,0.5"
        )
        assert status == 0
        obj = json.loads(out)
        assert obj["delta"][0] == pytest.approx(1.5707963, abs=1e-6)
        assert obj["delta"][1] == pytest.approx(4.7123890, abs=1e-6)

    def test_config_file_round_trip(self, capsys, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        status, _ = run(
            capsys, "config", "--theta", "0,3.14159265358979", "--alpha", "0.75,0.25",
            "--out", str(cfg_path),
        )
        assert status == 0
        args = ["bound", "general", "--z", "0.1,0.2", "--w", "0.05,-0.1", "--beta", "2,3"]
        _, direct = run(
            capsys, *args, "--theta", "0,3.14159265358979", "--alpha", "0.75,0.25"
        )
        _, via_file = run(capsys, *args, "--config-file", str(cfg_path))
        assert json.loads(direct)["bound"] == json.loads(via_file)["bound"]


class TestBoundCommands:
    def test_origin(self, capsys):
        status, out = run(capsys, "bound", "origin", "--beta", "2,2", "--alpha", "0.5,0.5")
        assert status == 0
        assert json.loads(out)["bound"] == 0.5

    def test_theorem_a_reports_both_variants(self, capsys):
        status, out = run(
            capsys, "bound", "theorem-a", "--z", "0,0", "--w", "0.5,0",
            "--beta", "0.3333333333333333",
        )
        assert status == 0
        obj = json.loads(out)
        assert obj["bound"]["derived_consistent"] == pytest.approx(0.75, abs=1e-12)
        assert obj["bound"]["as_printed"] == pytest.approx(4 / 3, abs=1e-12)
        assert obj["variant_operative"] == "derived_consistent"

    def test_slack_against_map_file(self, capsys, tmp_path):
        expr_path = tmp_path / "expr.json"
        status, out = run(
            capsys, "extremal", "closed-form", "--z", "0,0", "--w", "0,0",
            "--beta", "2", "--out", str(expr_path),
        )
        assert status == 0
        map_path = tmp_path / "map.json"
        map_path.write_text(json.dumps(json.loads(expr_path.read_text())["map"]))
        status, out = run(
            capsys, "bound", "theorem-a", "--z", "0,0", "--w", "0,0", "--beta", "2",
            "--map-file", str(map_path),
        )
        obj = json.loads(out)
        assert obj["slack"] == pytest.approx(0.0, abs=1e-12)


class TestOptimizationCommands:
    def test_optimal_alpha(self, capsys):
        status, out = run(
            capsys, "optimal-alpha", "--beta", "2.718281828459045,7.38905609893065"
        )
        assert status == 0
        obj = json.loads(out)
        assert obj["alpha"][0] == pytest.approx(2 / 3, abs=1e-12)

    def test_corollary(self, capsys):
        status, out = run(
            capsys, "corollary", "--beta", "7.38905609893065", "--phi-prime-0",
            "0.6065306597126334",
        )
        assert status == 0
        assert json.loads(out)["slack"] == pytest.approx(3.5, abs=1e-10)


class TestExtremalCommands:
    def test_ode_summary(self, capsys, tmp_path):
        status, out = run(
            capsys, "extremal", "ode", "--theta", "0", "--alpha", "1",
            "--c", "0.25", "--rays", "4",
        )
        assert status == 0
        obj = json.loads(out)
        assert obj["equality_audit"]["residual"] < 1e-3
        assert all(not ray["truncated"] for ray in obj["rays"])

    def test_measure_beta(self, capsys):
        status, out = run(
            capsys, "measure-beta", "--theta", "0", "--alpha", "1",
            "--c", "0.25", "--anchor", "0",
        )
        assert status == 0
        assert json.loads(out)["value"][0] == pytest.approx(2.0, abs=1e-4)

    def test_plot_outputs(self, capsys, tmp_path):
        out_dir = tmp_path / "plots"
        status, _ = run(
            capsys, "plot", "--theta", "0", "--alpha", "1", "--c", "0.25",
            "--rays", "6", "--out", str(out_dir),
        )
        assert status == 0
        csvs = sorted(out_dir.glob("ray_*.csv"))
        assert len(csvs) == 6
        header = csvs[0].read_text().splitlines()[0]
        assert header == "r,zeta_re,zeta_im,w_re,w_im,step,qd_residual"
        svg = (out_dir / "overlay.svg").read_text()
        assert svg.startswith("<svg") and "circle" in svg


class TestVerifyAndAudit:
    def test_suite_exit_zero_and_report(self, capsys, tmp_path):
        report_path = tmp_path / "report.json"
        status, _ = run(
            capsys, "verify", "suite", "--seed", "7", "--cases", "100",
            "--out", str(report_path),
        )
        assert status == 0
        obj = json.loads(report_path.read_text())
        assert obj["summary"]["violation"] == 0
        assert obj["summary"]["cases"] == 100

    def test_audit_exit_one(self, capsys):
        status, out = run(capsys, "audit", "variants")
        assert status == 1
        obj = json.loads(out)
        assert obj["derived_consistent"]["passed"] is True
        assert obj["as_printed"]["passed"] is False

    def test_env_seed_default(self, capsys, monkeypatch, tmp_path):
        monkeypatch.setenv("DIGON_SEED", "31")
        parser = cli.build_parser()
        args = parser.parse_args(["verify", "suite", "--cases", "10"])
        assert args.seed == 31


class TestErrors:
    def test_unknown_subcommand_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2

    def test_invalid_complex_exits_two(self, capsys):
        status = cli.main(["bound", "theorem-a", "--z", "nope", "--w", "0,0", "--beta", "2"])
        assert status == 2

    def test_domain_error_exits_two(self, capsys):
        status = cli.main(["bound", "theorem-a", "--z", "2,0", "--w", "0,0", "--beta", "2"])
        assert status == 2


class TestFormatting:
    def test_seventeen_significant_digits(self, capsys):
        _, out = run(capsys, "bound", "origin", "--beta", "1.1", "--alpha", "1")
        assert "0.82644628099173545" in out  # 1/1.1^2 at 17 significant digits
