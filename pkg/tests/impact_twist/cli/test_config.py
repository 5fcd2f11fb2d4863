import json

import pytest

from impact_twist.cli import ExperimentConfig, load_config, parse_config
from impact_twist.exceptions import ConfigParseError


class TestParseConfig:
    """Test suite for parse_config and load_config."""

    def test_valid_config(self, config_data):
        """Test that a well-formed document gives typed sections."""
        config = parse_config(json.dumps(config_data))
        assert config.potential.n == 1
        assert config.potential.coefficients[0].cos == (0.5,)
        assert config.experiment.name == "poincare"
        assert config.integrator.rel_tol == 1e-10
        assert config.regime.gentrig_nodes == 256
        assert config.regime.options().i_min == 10.0
        assert config.output.formats == ["csv"]
        assert not config.validation_mode

    def test_defaults(self):
        """Test that only the potential and the experiment are required."""
        config = parse_config('{"potential": {"n": 2}, "experiment": "sweep"}')
        assert config.experiment.name == "sweep"
        assert config.experiment.threshold == 1.5
        assert config.grids.ic_count == 20
        assert config.output.formats == ["csv", "svg"]
        assert config.seed == 0

    def test_syntax_error_has_location(self):
        """Test that JSON syntax errors carry the line number."""
        text = '{\n  "potential": {"n": 1},\n  "experiment": "orbit",,\n}'
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(text, "broken.json")
        assert excinfo.value.line == 3
        assert "broken.json" in str(excinfo.value)

    def test_schema_errors_list_every_field(self, config_data):
        """Test that each failing field is reported with its path."""
        config_data["experiment"]["name"] = "bifurcation"
        config_data["regime"]["gentrig_nodes"] = 16
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(json.dumps(config_data))
        problems = excinfo.value.problems
        assert any(problem.startswith("experiment.name") for problem in problems)
        assert any(problem.startswith("regime.gentrig_nodes") for problem in problems)

    def test_schema_errors_have_lines(self, config_data):
        """Test that each failing field points at the line of its key."""
        config_data["experiment"]["name"] = "bifurcation"
        config_data["regime"]["gentrig_nodes"] = 16
        text = json.dumps(config_data, indent=2)
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(text)
        lines = text.splitlines()
        located = dict(zip(excinfo.value.problems, excinfo.value.problem_lines))
        for problem, line in located.items():
            key = problem.split(":")[0].split(".")[-1]
            assert f'"{key}":' in lines[line - 1]
        assert excinfo.value.line in located.values()

    def test_unknown_key_rejected(self, config_data):
        """Test that misspelled keys are not silently ignored."""
        config_data["grids"]["epsilon"] = [1e-3]
        with pytest.raises(ConfigParseError):
            parse_config(json.dumps(config_data))

    def test_load_config(self, config_data, write_config):
        """Test reading a configuration from disk."""
        config = load_config(write_config(config_data))
        assert isinstance(config, ExperimentConfig)
        assert config.grids.epsilons == [1e-2, 1e-3]

    def test_missing_file(self, tmp_path):
        """Test that an unreadable file is a ConfigParseError."""
        with pytest.raises(ConfigParseError) as excinfo:
            load_config(tmp_path / "missing.json")
        assert "cannot read file" in str(excinfo.value)


class TestOverrides:
    """Test suite for ExperimentConfig.with_overrides."""

    def test_output_and_seed(self, config_data, tmp_path):
        """Test that --out and --seed replace the configured values."""
        config = parse_config(json.dumps(config_data))
        updated = config.with_overrides(out=tmp_path / "results", seed=11)
        assert updated.output.directory == str(tmp_path / "results")
        assert updated.output.formats == ["csv"]
        assert updated.seed == 11
        assert config.seed == 0

    def test_no_overrides(self, config_data):
        """Test that missing overrides keep the configuration."""
        config = parse_config(json.dumps(config_data))
        assert config.with_overrides() == config
