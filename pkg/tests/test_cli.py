"""Command-line verbs: exit codes, artifacts, stdout renderings."""

import json
import math
import os

import numpy as np
import pytest

from netsiri.cli import main
from netsiri.scenario import (Scenario, SetRecovery, StochasticSettings,
                              save_scenario)

HERE = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIG4 = os.path.join(HERE, "scenarios", "fig4_bistable.json")
FIG3 = os.path.join(HERE, "scenarios", "fig3_endemic.json")


@pytest.fixture()
def pair_scenario(tmp_path):
    """Subcritical SIS pair: dies out fast, has a control and MC settings."""
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    sc = Scenario(n=2, adjacency=a, beta=0.3 * a, beta_hat=0.3 * a,
                  delta=np.ones(2), p_s0=np.array([0.7, 1.0]),
                  p_i0=np.array([0.3, 0.0]), t_end=60.0, dt=0.01,
                  controls=(SetRecovery(agent=0, value=2.0),),
                  stochastic=StochasticSettings(trials=40, seed=7),
                  provenance="cli test fixture")
    path = tmp_path / "pair.json"
    save_scenario(sc, path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


ANALYSIS_KEYS = ("case", "stubborn", "r0", "r1", "rmin", "rmax",
                 "p_min", "p_max", "exact", "regime")


class TestAnalyze:
    def test_json_format_and_artifact(self, tmp_path, capsys):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "--format", "json", "analyze", FIG4)
        assert code == 0
        body = out[:out.rindex("wrote ")]
        report = json.loads(body)
        assert tuple(report.keys()) == ANALYSIS_KEYS
        assert report["case"] == "MixedWeak"
        assert report["regime"] == "Bistable"
        assert report["exact"] is True
        assert math.isclose(report["r0"], math.sqrt(1.04), rel_tol=1e-12)
        assert math.isclose(report["r1"], math.sqrt(1.04), rel_tol=1e-12)
        assert math.isclose(report["rmin"], 0.8, rel_tol=1e-12)
        assert math.isclose(report["rmax"], 1.3, rel_tol=1e-12)
        art = tmp_path / "fig4_bistable_analysis.json"
        assert json.loads(art.read_text()) == report

    def test_text_format(self, tmp_path, capsys):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "analyze", FIG4)
        assert code == 0
        assert "regime:   Bistable" in out
        assert "case:     MixedWeak" in out

    def test_csv_format(self, tmp_path, capsys):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "--format", "csv", "analyze", FIG4)
        assert code == 0
        lines = [l for l in out.splitlines() if "," in l and
                 not l.startswith("wrote")]
        assert [l.split(",", 1)[0] for l in lines] == list(ANALYSIS_KEYS)

    def test_apply_controls_changes_report(self, tmp_path, capsys,
                                           pair_scenario):
        _, out_plain, _ = run(capsys, "--output-dir", str(tmp_path),
                              "--format", "json", "analyze", pair_scenario)
        _, out_ctrl, _ = run(capsys, "--output-dir", str(tmp_path),
                             "--format", "json", "analyze", pair_scenario,
                             "--apply-controls")
        r0_plain = json.loads(out_plain[:out_plain.rindex("wrote ")])["r0"]
        r0_ctrl = json.loads(out_ctrl[:out_ctrl.rindex("wrote ")])["r0"]
        assert math.isclose(r0_plain, 0.3, rel_tol=1e-9)
        # recovery of agent 1 doubled: spectral radius of B D^-1 drops
        assert math.isclose(r0_ctrl, 0.3 / math.sqrt(2.0), rel_tol=1e-9)


class TestSimulate:
    def test_dieout_text_and_csv(self, tmp_path, capsys, pair_scenario):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "simulate", pair_scenario)
        assert code == 0
        assert "outcome: ConvergedIFE" in out
        csv = (tmp_path / "pair_trajectory.csv").read_text().splitlines()
        header = [c.strip() for c in csv[0].split(",")]
        assert header == ["t", "pS_1", "pS_2", "pI_1", "pI_2",
                          "pI_avg", "lambda"]
        first = [float(x) for x in csv[1].split(",")]
        assert first[0] == 0.0
        assert first[3] == 0.3 and first[4] == 0.0

    def test_json_doc(self, tmp_path, capsys, pair_scenario):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "--format", "json", "simulate", pair_scenario)
        assert code == 0
        doc = json.loads(out[:out.rindex("wrote ")])
        assert doc["outcome"] == "ConvergedIFE"
        assert max(doc["p_i_final"]) <= 1e-7
        assert len(doc["p_s_final"]) == 2

    def test_t_end_override(self, tmp_path, capsys, pair_scenario):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "--format", "json", "simulate", pair_scenario,
                           "--t-end", "0.5")
        assert code == 0
        doc = json.loads(out[:out.rindex("wrote ")])
        assert doc["outcome"] == "Undecided"
        assert doc["horizon"] == 0.5


class TestEquilibrium:
    def test_supercritical(self, tmp_path, capsys):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "equilibrium", FIG3)
        assert code == 0
        assert "endemic equilibrium:" in out
        doc = json.loads((tmp_path / "fig3_endemic_equilibrium.json")
                         .read_text())
        assert doc["exists"] is True
        assert doc["residual"] <= 1e-12
        assert doc["ja_lambda"] < 0.0

    def test_subcritical(self, tmp_path, capsys, pair_scenario):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "equilibrium", pair_scenario)
        assert code == 0
        assert "no endemic equilibrium" in out
        doc = json.loads((tmp_path / "pair_equilibrium.json").read_text())
        assert doc["exists"] is False


class TestPartition:
    def test_boundary_csv(self, tmp_path, capsys):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "partition", FIG4, "--rays", "8")
        assert code == 0
        assert "8 rays" in out
        rows = (tmp_path / "fig4_bistable_m0.csv").read_text().splitlines()
        assert [c.strip() for c in rows[0].split(",")] == \
            ["pS_1", "pS_2", "lambda"]
        assert 1 <= len(rows) - 1 <= 8
        for row in rows[1:]:
            ps1, ps2, lam = (float(x) for x in row.split(","))
            assert 0.0 <= ps1 <= 1.0 and 0.0 <= ps2 <= 1.0
            assert abs(lam) <= 1e-8


class TestStochastic:
    def test_artifact_and_determinism(self, tmp_path, capsys, pair_scenario):
        argv = ["--format", "text", "stochastic", pair_scenario,
                "--trials", "25", "--t-end", "2.0", "--points", "5"]
        code, out, _ = run(capsys, "--output-dir", str(tmp_path / "a"), *argv)
        assert code == 0
        assert "25 trials, seed 7, generator pcg64" in out
        code, _, _ = run(capsys, "--output-dir", str(tmp_path / "b"), *argv)
        assert code == 0
        text_a = (tmp_path / "a" / "pair_mc.csv").read_text()
        text_b = (tmp_path / "b" / "pair_mc.csv").read_text()
        assert text_a == text_b
        rows = text_a.splitlines()
        assert len(rows) == 6
        cols = [c.strip() for c in rows[0].split(",")]
        assert cols == ["t", "pIhat_1", "pIhat_2", "stderr_1", "stderr_2"]

    def test_seed_flag_overrides(self, tmp_path, capsys, pair_scenario):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "--seed", "123", "stochastic", pair_scenario,
                           "--trials", "10", "--t-end", "1.0",
                           "--points", "3")
        assert code == 0
        assert "seed 123" in out


class TestSweep:
    def test_sets_compared(self, tmp_path, capsys, pair_scenario):
        code, out, _ = run(capsys, "--output-dir", str(tmp_path),
                           "sweep", pair_scenario,
                           "--sets", "", "--sets", "1,2")
        assert code == 0
        assert "none" in out and "1+2" in out
        assert out.count("ConvergedIFE") == 2
        rows = (tmp_path / "pair_sweep.csv").read_text().splitlines()
        assert rows[0] == "set, t, pI_mean"
        labels = {r.split(",")[0] for r in rows[1:]}
        assert labels == {"none", "1+2"}


class TestErrors:
    def test_missing_file(self, tmp_path, capsys):
        code, out, err = run(capsys, "--output-dir", str(tmp_path),
                             "analyze", str(tmp_path / "nope.json"))
        assert code == 1
        assert err.startswith("error:")
        assert out == ""

    def test_invalid_scenario(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 1}\n')
        code, _, err = run(capsys, "--output-dir", str(tmp_path),
                           "analyze", str(bad))
        assert code == 1
        assert "missing scenario fields" in err
