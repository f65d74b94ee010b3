"""
End-to-end tests of the command-line front end.
"""

import hashlib
import json

import pytest

from treecrit import __version__
from treecrit.cli import main


@pytest.fixture
def env_path(fixtures_dir):
    return lambda name: str(fixtures_dir / name)


class TestClassifyCommand:
    def test_prints_verdict_json(self, env_path, capsys):
        code = main(["classify", "--env", env_path("pm04.json")])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["y_regime"] == "Finite"
        assert payload["rwre"] == "PositiveRecurrent"
        assert payload["lambda1"] == pytest.approx(0.8, rel=1e-8)
        assert "lambda" in payload

    def test_writes_out_with_manifest(self, env_path, tmp_path, capsys):
        out = tmp_path / "verdict.json"
        assert main(["classify", "--env", env_path("lognormal01.json"), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["y_regime"] == "Infinite"
        manifest = json.loads((tmp_path / "verdict.json.manifest.json").read_text())
        assert manifest["command"] == "classify"
        assert manifest["version"] == __version__
        assert manifest["outputs"][str(out)] == hashlib.sha256(out.read_bytes()).hexdigest()

    def test_malformed_config_exits_2(self, env_path, capsys):
        code = main(["classify", "--env", env_path("malformed.json")])
        assert code == 2
        assert "error [SCHEMA_VIOLATION]" in capsys.readouterr().err

    def test_missing_entry_names_field(self, env_path, capsys):
        code = main(["classify", "--env", env_path("missing_entry.json")])
        assert code == 2
        err = capsys.readouterr().err
        assert "missing entry (2,2)" in err
        assert "(field: entries[2][2])" in err

    def test_negative_sigma_names_field(self, env_path, capsys):
        assert main(["classify", "--env", env_path("negative_sigma.json")]) == 2
        assert "entries[2][2].sigma" in capsys.readouterr().err


class TestSweepCommand:
    def test_point_mass_root(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(
            ["sweep", "--family", "pointmass-b2", "--param-range", "0.1:0.9", "--points", "5",
             "--out", str(out)]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["c"] == pytest.approx(0.5, abs=1e-4)
        lines = out.read_text().splitlines()
        assert lines[0] == "# command=sweep"
        assert "c,lambda1" in lines
        assert lines[-1] == "0.9,1.8"

    def test_bad_range_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--family", "sec51", "--param-range", "0.1"])
        assert exc.value.code == 2

    def test_no_crossing_exits_3(self, capsys):
        code = main(["sweep", "--family", "pointmass-b2", "--param-range", "0.1:0.3"])
        assert code == 3
        assert "NO_CROSSING" in capsys.readouterr().err


class TestRateFunctionCommand:
    def test_unbounded_points_render_as_inf(self, env_path, capsys):
        assert main(["rate-function", "--env", env_path("pm04.json"), "--z", "-1:0:3"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "z,rate,s0"
        assert lines[2].startswith("-1,0,")
        assert lines[3].split(",")[1] == "+inf"
        assert lines[4].split(",")[1] == "+inf"


class TestFamiliesCommand:
    def test_lists_families(self, capsys):
        assert main(["families"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert "ratio_uniform" in {f["kind"] for f in payload["label_families"]}
        assert {f["name"] for f in payload["catalogue"]} == {"sec51", "pointmass-b2", "normal01"}


class TestSimulateCommands:
    def test_tree_output_is_reproducible(self, env_path, tmp_path, capsys):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (first, second):
            code = main(
                ["simulate", "tree", "--env", env_path("lognormal01.json"), "--depth", "4",
                 "--trials", "20", "--seed", "11", "--out", str(out)]
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()
        assert "level,empirical_mean,std_err,oracle,n_trials" in first.read_text()

    def test_tree_thread_count_does_not_change_output(self, env_path, tmp_path, capsys):
        outputs = []
        for threads in ("1", "4"):
            out = tmp_path / f"t{threads}.csv"
            main(
                ["--threads", threads, "simulate", "tree", "--env", env_path("lognormal01.json"),
                 "--depth", "3", "--trials", "12", "--seed", "5", "--out", str(out)]
            )
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_tree_exceedances(self, env_path, tmp_path, capsys):
        out = tmp_path / "x.csv"
        code = main(
            ["simulate", "tree", "--env", env_path("pm04.json"), "--depth", "3", "--trials", "2",
             "--x", "0.1", "--out", str(out)]
        )
        assert code == 0
        rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
        assert rows[0] == "trial,level,count"
        assert rows[1:5] == ["0,0,1", "0,1,2", "0,2,4", "0,3,0"]

    def test_tree_budget_exits_4(self, env_path, tmp_path, capsys):
        code = main(
            ["simulate", "tree", "--env", env_path("pm04.json"), "--depth", "40",
             "--out", str(tmp_path / "big.csv")]
        )
        assert code == 4
        assert "BUDGET_EXCEEDED" in capsys.readouterr().err
        assert not (tmp_path / "big.csv").exists()

    def test_rde_on_rwre_joint_exits_3(self, env_path, tmp_path, capsys):
        code = main(
            ["simulate", "rde", "--env", env_path("sec51_h05.json"), "--out", str(tmp_path / "r.csv")]
        )
        assert code == 3
        assert "UNSUPPORTED_ENVIRONMENT" in capsys.readouterr().err

    def test_rde_point_mass(self, env_path, tmp_path, capsys):
        out = tmp_path / "rde.csv"
        code = main(
            ["simulate", "rde", "--env", env_path("pm03.json"), "--pool", "50", "--iters", "60",
             "--out", str(out)]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["final_means"] == pytest.approx([2.5, 2.5], abs=1e-3)
        assert not payload["diverged"]

    def test_walk(self, env_path, tmp_path, capsys):
        out = tmp_path / "walk.csv"
        code = main(
            ["simulate", "walk", "--env", env_path("sec51_h05.json"), "--steps", "500",
             "--walks", "2", "--out", str(out)]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["walks"] == 2
        assert (tmp_path / "walk.csv.manifest.json").exists()

    def test_walk_needs_rwre_env(self, env_path, tmp_path, capsys):
        code = main(
            ["simulate", "walk", "--env", env_path("pm04.json"), "--steps", "10",
             "--out", str(tmp_path / "w.csv")]
        )
        assert code == 3

    def test_brw_with_trace(self, env_path, tmp_path, capsys):
        out, trace = tmp_path / "brw.csv", tmp_path / "trace.csv"
        code = main(
            ["simulate", "brw", "--spec", env_path("unit_brw.json"), "--t", "5", "--trials", "3",
             "--out", str(out), "--trace", str(trace)]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["degenerate"]
        assert payload["x0"] == pytest.approx(1.0, abs=1e-12)
        assert "# x0=1" in out.read_text()
        assert "generation,mu_t,frontier_size,pruned_flag" in trace.read_text()
        manifest = json.loads((tmp_path / "brw.csv.manifest.json").read_text())
        assert set(manifest["outputs"]) == {str(out), str(trace)}
        assert manifest["seed"] == 0

    def test_fpp(self, env_path, tmp_path, capsys):
        out = tmp_path / "fpp.csv"
        code = main(
            ["simulate", "fpp", "--spec", env_path("unit_brw.json"), "--t", "2.5", "--depth", "3",
             "--trials", "1", "--out", str(out)]
        )
        assert code == 0
        rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
        assert rows == ["trial,level,reached", "0,0,1", "0,1,2", "0,2,4", "0,3,0"]
