"""CLI behaviours: outputs, exit codes, determinism, cache coherence."""

import json

import pytest

from tightwp import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestTau:
    def test_exact_value(self, capsys):
        code, out, _ = run(capsys, "tau", "--genus", "2", "--indices", "4")
        assert code == 0
        assert out.splitlines()[0] == "1/1152"

    def test_base_case(self, capsys):
        code, out, _ = run(capsys, "tau", "--genus", "0",
                           "--indices", "0,0,0")
        assert code == 0
        assert out.splitlines()[0] == "1/1"

    def test_dimension_gate_prints_zero(self, capsys):
        code, out, _ = run(capsys, "tau", "--genus", "2", "--indices", "1")
        assert code == 0
        assert out.splitlines()[0] == "0"

    def test_unstable_key_is_user_error(self, capsys):
        code, _, err = run(capsys, "tau", "--genus", "0", "--indices", "0")
        assert code == 2
        assert "unstable" in err


class TestPoly:
    def test_verdict_line(self, capsys):
        code, out, _ = run(capsys, "poly", "-g", "0", "-n", "4")
        assert code == 0
        assert "symmetric ✓ graded ✓" in out
        assert "-1/1" in out  # the -m1 term

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "poly",
                           "-g", "1", "-n", "1")
        assert code == 0
        obj = json.loads(out)
        assert obj["terms"] == [[[1], [0], "1/48"], [[0], [1], "-1/24"]]

    def test_inadmissible_is_user_error(self, capsys):
        code, _, err = run(capsys, "poly", "-g", "0", "-n", "2")
        assert code == 2

    def test_budget_exit_code(self, capsys):
        code, _, err = run(capsys, "poly", "-g", "5", "-n", "6",
                           "--budget", "10000")
        assert code == 3
        assert "budget" in err


class TestMoments:
    def test_mu_zero_values(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "moments",
                           "--mu", "0", "--dmax", "2")
        assert code == 0
        obj = json.loads(out)
        assert obj["moments"]["M0"] == "1.0"
        assert obj["moments"]["M1"].startswith("-19.7392")
        assert obj["mu_c"].startswith("0.0316")

    def test_out_of_range_mu(self, capsys):
        code, _, err = run(capsys, "moments", "--mu", "0.9")
        assert code == 2


class TestCusps:
    def test_target_mode_reports_seed_estimate(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "cusps", "-g", "4",
                           "--target", "1000")
        assert code == 0
        obj = json.loads(out)
        assert obj["seed_estimate"].startswith("0.03130")
        assert abs(float(obj["mean"]) - 1000) < 1e-4

    def test_stats_mode(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "cusps", "-g", "2",
                           "--mu", "0.015")
        assert code == 0
        obj = json.loads(out)
        assert float(obj["mean"]) > 0

    def test_needs_mu_or_target(self, capsys):
        code, _, err = run(capsys, "cusps", "-g", "2")
        assert code == 2


class TestVolumes:
    def test_t_volume(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "volumes", "-g", "1",
                           "-n", "1", "--L", "0", "--mu", "0")
        assert code == 0
        obj = json.loads(out)
        assert float(obj["value"]) == pytest.approx(0.8224670334, rel=1e-9)

    def test_extraction_mode(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "volumes", "-g", "0",
                           "-n", "3", "--pmax", "1")
        assert code == 0
        obj = json.loads(out)
        assert obj["volumes"][0]["pi2_poly"] == [[0, "1/1"]]
        assert obj["volumes"][1]["pi2_poly"] == [[1, "2/1"]]


class TestSpectrum:
    def test_csv_table(self, capsys):
        code, out, _ = run(capsys, "--format", "csv", "spectrum",
                           "--g-range", "3:4", "--beta", "4",
                           "--windows", "1:2")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "g,mu,expected_count,lambda_target,ratio"
        assert len(lines) == 3
        assert lines[1].startswith("3,")

    def test_beta_gate(self, capsys):
        code, _, err = run(capsys, "spectrum", "--g-range", "3:4",
                           "--beta", "2", "--windows", "1:2")
        assert code == 2
        assert "beta" in err

    def test_beta_override_warns(self, capsys):
        code, out, err = run(capsys, "spectrum", "--g-range", "6:6",
                             "--beta", "2", "--windows", "1:2",
                             "--allow-beta")
        assert code == 0
        assert "warning" in err


class TestSample:
    def test_deterministic_reports(self, capsys):
        _, out1, _ = run(capsys, "--format", "json", "sample", "--kind",
                         "poisson", "--t-max", "2.5", "--count", "4",
                         "--seed", "11")
        _, out2, _ = run(capsys, "--format", "json", "sample", "--kind",
                         "poisson", "--t-max", "2.5", "--count", "4",
                         "--seed", "11")
        assert out1 == out2

    def test_seed_after_subcommand(self, capsys):
        code, out, _ = run(capsys, "sample", "--kind", "poisson",
                           "--t-max", "2.0", "--seed", "5")
        assert code == 0

    def test_cusp_kind_needs_args(self, capsys):
        code, _, err = run(capsys, "sample", "--kind", "cusps")
        assert code == 2


class TestVerify:
    def test_fast_suite_passes(self, capsys, tmp_path):
        report = tmp_path / "report.json"
        code, out, _ = run(capsys, "verify", "--suite", "fast",
                           "--report-file", str(report))
        assert code == 0
        obj = json.loads(report.read_text())
        assert obj["passed"] is True
        names = [c["criterion"] for c in obj["criteria"]]
        assert names == ["C01 constants", "C02 exact polynomial identities",
                         "C03 classical volume oracle",
                         "C04 series extraction"]
        for crit in obj["criteria"]:
            for check in crit["checks"]:
                assert set(check) >= {"name", "passed", "measured",
                                     "tolerance"}


class TestCacheBehaviour:
    def test_cold_and_warm_runs_identical(self, capsys, tmp_path,
                                          monkeypatch):
        from tightwp import tightpoly

        cache_dir = str(tmp_path / "c")
        monkeypatch.setattr(tightpoly, "_cells", {})
        code1, out1, _ = run(capsys, "--cache-dir", cache_dir, "poly",
                             "-g", "1", "-n", "2")
        monkeypatch.setattr(tightpoly, "_cells", {})
        code2, out2, _ = run(capsys, "--cache-dir", cache_dir, "poly",
                             "-g", "1", "-n", "2")
        assert code1 == code2 == 0
        assert out1 == out2
        assert (tmp_path / "c" / "poly" / "g1_n2.twp").exists()

    def test_tampered_cache_exits_four(self, capsys, tmp_path, monkeypatch):
        from tightwp import tightpoly

        cache_dir = tmp_path / "c"
        monkeypatch.setattr(tightpoly, "_cells", {})
        run(capsys, "--cache-dir", str(cache_dir), "poly", "-g", "1",
            "-n", "2")
        path = cache_dir / "poly" / "g1_n2.twp"
        path.write_bytes(path.read_bytes()[:-6])
        monkeypatch.setattr(tightpoly, "_cells", {})
        code, _, err = run(capsys, "--cache-dir", str(cache_dir), "poly",
                           "-g", "1", "-n", "2")
        assert code == 4
        assert "cache" in err
