import importlib
import json

import pytest

from impact_twist.cli import main
from impact_twist.exceptions import EscapeError

# the package re-exports the main() function under the module name
main_module = importlib.import_module("impact_twist.cli.main")


@pytest.fixture
def run(tmp_path, write_config):
    """Run a configuration into a fresh output directory; returns (exit code, directory)."""

    def run_config(data, *extra, out="out"):
        directory = tmp_path / out
        code = main(["run", str(write_config(data)), "--out", str(directory), *extra])
        return code, directory

    return run_config


class TestValidateCommand:
    """Test suite for `impact-twist validate`."""

    def test_ok(self, config_data, write_config, capsys):
        """Test exit code 0 and the OK line."""
        path = write_config(config_data)
        assert main(["validate", str(path)]) == main_module.EXIT_OK
        assert capsys.readouterr().out.strip() == f"{path}: OK"

    def test_violations(self, config_data, write_config, capsys):
        """Test exit code 2 and one line per violation."""
        config_data["potential"] = {"n": 0}
        config_data["grids"]["epsilons"] = []
        path = write_config(config_data)
        assert main(["validate", str(path)]) == main_module.EXIT_INVALID
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert all(line.startswith(f"{path}: ") for line in lines)

    def test_missing_subcommand(self):
        """Test that argparse rejects a call without a command."""
        with pytest.raises(SystemExit):
            main([])


class TestRunCommand:
    """Test suite for `impact-twist run`."""

    def test_gentrig_check(self, run):
        """Test the table self-check artifacts and summary."""
        data = {
            "potential": {"n": 1},
            "experiment": "gentrig-check",
            "regime": {"gentrig_nodes": 256},
            "output": {"formats": ["csv", "svg"]},
        }
        code, directory = run(data)
        assert code == main_module.EXIT_OK
        manifest = json.loads((directory / "manifest.json").read_text())
        assert manifest["experiment"] == "gentrig-check"
        assert manifest["summary"]["max_defect"] < 1e-9
        assert manifest["summary"]["T0"] == pytest.approx(manifest["summary"]["T0_beta"])
        assert set(manifest["files"]) == {
            "gentrig_check.csv",
            "gentrig_check.svg",
            "manifest.json",
        }
        header = (directory / "gentrig_check.csv").read_text().splitlines()[0]
        assert header == "t,C,S,defect"

    def test_successor(self, run):
        """Test the successor table of an unperturbed run."""
        data = {
            "potential": {"n": 1},
            "experiment": {"name": "successor", "v0": 10.0, "impacts": 5},
            "regime": {"gentrig_nodes": 256},
            "output": {"formats": ["csv"]},
        }
        code, directory = run(data)
        assert code == main_module.EXIT_OK
        lines = (directory / "successor.csv").read_text().splitlines()
        assert lines[0] == "index,t,v,flight_time"
        assert lines[1] == "0,0.0,10.0,"
        assert len(lines) == 7

    def test_poincare_is_deterministic_across_jobs(self, run, config_data):
        """Test that --jobs does not change the data files."""
        code_serial, serial = run(config_data, "--jobs", "1", out="serial")
        code_parallel, parallel = run(config_data, "--jobs", "2", out="parallel")
        assert code_serial == code_parallel == main_module.EXIT_OK
        first = (serial / "poincare.csv").read_text()
        assert first == (parallel / "poincare.csv").read_text()
        assert len(first.splitlines()) == 1 + 2 * 2 * 2

    def test_seed_override_in_manifest(self, run, config_data):
        """Test that --seed is recorded in the manifest configuration."""
        code, directory = run(config_data, "--seed", "5", "--jobs", "1")
        assert code == main_module.EXIT_OK
        manifest = json.loads((directory / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 5
        assert manifest["jobs"] == 1
        assert "numpy" in manifest["versions"]

    def test_invalid_configuration(self, run, config_data, capsys):
        """Test that violations stop the run with exit code 2."""
        config_data["grids"]["epsilons"] = []
        code, directory = run(config_data)
        assert code == main_module.EXIT_INVALID
        assert not directory.exists()
        assert "grids.epsilons must not be empty" in capsys.readouterr().err

    def test_unparseable_configuration(self, tmp_path, capsys):
        """Test that a syntax error is exit code 2."""
        path = tmp_path / "broken.json"
        path.write_text("{")
        assert main(["run", str(path)]) == main_module.EXIT_INVALID
        assert "Invalid configuration" in capsys.readouterr().err

    def test_experiment_failure(self, run, config_data, monkeypatch, capsys):
        """Test that a failing experiment is exit code 1 without a manifest."""

        def failing(config, writer, jobs):
            raise EscapeError(3.0, 30.0)

        monkeypatch.setitem(main_module.EXPERIMENTS, "poincare", failing)
        code, directory = run(config_data)
        assert code == main_module.EXIT_FAILURE
        assert not (directory / "manifest.json").exists()
        assert "poincare failed" in capsys.readouterr().err
