"""Tests for the scenario parser/renderer and the lab settings"""

from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from config.scenario import ScenarioSpec, load_scenario, parse_config, render_scenario
from config.settings import DEFAULT_YAML, LabSettings, LoggingSettings, RuntimeSettings, StrichartzDefaults
from spectral.errors import ConfigError

SCENARIO_DIR = Path(__file__).parent.parent / "scenarios"

BASE = """\
[scenario]
name = small
kind = single-run
[solver]
n = 16
"""


def _error(text, settings):
    with pytest.raises(ConfigError) as info:
        parse_config(text, settings)
    return info.value


# ==================== Parsing ====================

class TestParseConfig:
    def test_defaults_applied(self, lab_settings):
        spec = parse_config(BASE, lab_settings)
        assert spec.kind == "single-run"
        assert spec.solver.n == 16
        assert spec.solver.cfl_max == 0.5
        assert spec.solver.besov_stride == 1
        assert spec.data.generator == "taylor-green"
        assert spec.outputs == f"{lab_settings.runtime.output_root}/small"
        assert spec.kind_section is None

    def test_comments_and_case(self, lab_settings):
        text = "# header\n[scenario]\nname = small ; trailing\nkind = single-run\n[Solver]\nN = 16  # grid\n"
        spec = parse_config(text, lab_settings)
        assert spec.name == "small"
        assert spec.solver.n == 16

    def test_beltrami_modes(self, lab_settings):
        spec = parse_config(BASE + "[data]\ngenerator = beltrami\nmodes = 1 0 1, 1 1 0\nsign = -1\n", lab_settings)
        assert spec.data.params() == {"modes": [(1, 0, 1), (1, 1, 0)], "sign": -1}

    def test_kind_sections(self, lab_settings):
        text = "[scenario]\nname = d\nkind = delta-study\n[delta_study]\ndeltas = 0.1, 0.05\n"
        spec = parse_config(text, lab_settings)
        assert spec.delta_study.deltas == [0.1, 0.05]
        assert spec.kind_section is spec.delta_study

        verify = parse_config("[scenario]\nname = v\nkind = verify-lemmas\n", lab_settings)
        assert verify.verify.n == 16
        assert verify.verify.seeds == [0, 1]

    @pytest.mark.parametrize("path", sorted(SCENARIO_DIR.glob("*.cfg")), ids=lambda p: p.stem)
    def test_shipped_scenarios_parse(self, path, lab_settings):
        spec = load_scenario(path, lab_settings)
        assert spec.name == path.stem


class TestConfigErrors:
    def test_unknown_section(self, lab_settings):
        error = _error(BASE + "[plotting]\n", lab_settings)
        assert error.lines == (6,)
        assert "unknown section [plotting]" in str(error)
        assert str(error).startswith("line 6:")

    def test_duplicate_section(self, lab_settings):
        error = _error(BASE + "[solver]\n", lab_settings)
        assert error.lines == (4, 6)
        assert str(error).startswith("lines 4, 6:")

    def test_duplicate_key(self, lab_settings):
        error = _error(BASE + "n = 32\n", lab_settings)
        assert error.lines == (5, 6)
        assert "duplicate key 'n'" in str(error)

    def test_line_without_assignment(self, lab_settings):
        error = _error(BASE + "garbage\n", lab_settings)
        assert error.lines == (6,)
        assert "expected 'key = value'" in str(error)

    def test_key_outside_section(self, lab_settings):
        error = _error("name = x\n" + BASE, lab_settings)
        assert error.lines == (1,)

    def test_missing_scenario(self, lab_settings):
        assert "missing [scenario] section" in str(_error("[solver]\nn = 16\n", lab_settings))

    def test_missing_kind(self, lab_settings):
        error = _error("[scenario]\nname = x\n", lab_settings)
        assert error.lines == (1,)
        assert "missing required key 'kind'" in str(error)

    def test_unknown_kind(self, lab_settings):
        error = _error(BASE.replace("single-run", "movie"), lab_settings)
        assert error.lines == (3,)
        assert "kind must be one of" in str(error)

    def test_unknown_solver_key(self, lab_settings):
        error = _error(BASE + "viscosity = 1\n", lab_settings)
        assert error.lines == (6,)
        assert "[solver] unknown key 'viscosity'" in str(error)

    def test_type_mismatch(self, lab_settings):
        error = _error(BASE.replace("n = 16", "n = 24"), lab_settings)
        assert error.lines == (5,)
        assert "power of two" in str(error)

        error = _error(BASE + "dt = fast\n", lab_settings)
        assert error.lines == (6,)

    def test_section_for_other_kind(self, lab_settings):
        error = _error(BASE + "[delta_study]\ndeltas = 0.1\n", lab_settings)
        assert error.lines == (6,)
        assert "does not apply to kind single-run" in str(error)

    def test_missing_kind_section_key(self, lab_settings):
        error = _error("[scenario]\nname = d\nkind = delta-study\n", lab_settings)
        assert "missing required key 'deltas'" in str(error)

    def test_generator_parameter_mismatch(self, lab_settings):
        error = _error(BASE + "[data]\ngenerator = taylor-green\nk0 = 2\n", lab_settings)
        assert error.lines == (6,)
        assert "does not apply to generator taylor-green" in str(error)

    def test_unsafe_name(self, lab_settings):
        error = _error(BASE.replace("name = small", "name = ../up"), lab_settings)
        assert error.lines == (2,)

    def test_config_error_is_a_validation_failure(self):
        assert isinstance(ConfigError("x"), ValueError)


# ==================== Rendering ====================

class TestRendering:
    @pytest.mark.parametrize("path", sorted(SCENARIO_DIR.glob("*.cfg")), ids=lambda p: p.stem)
    def test_render_parses_back(self, path, lab_settings):
        spec = load_scenario(path, lab_settings)
        assert parse_config(render_scenario(spec), lab_settings) == spec

    def test_every_default_is_written(self, lab_settings):
        text = render_scenario(parse_config(BASE, lab_settings))
        assert "bkm_ceiling = none" in text
        assert "scheme = ifrk4" in text
        assert "dealias = true" in text

    def test_with_seed(self, lab_settings):
        spec = load_scenario(SCENARIO_DIR / "uniqueness.cfg", lab_settings).with_seed(41)
        assert spec.data.seed == 41
        assert spec.uniqueness.seed == 41

        verify = ScenarioSpec(name="v", kind="verify-lemmas", outputs="out", verify={"n": 16}).with_seed(7)
        assert verify.verify.seeds == [7, 8]


# ==================== Settings ====================

class TestSettings:
    def test_missing_yaml_gives_defaults(self, tmp_path):
        settings = LabSettings.load_from_yaml(tmp_path / "absent.yaml")
        assert settings.app_name == "reulab"
        assert settings.runtime.output_root == "runs"

    def test_shipped_yaml(self):
        settings = LabSettings.load_from_yaml(DEFAULT_YAML)
        assert settings.solver_defaults.cfl_max == 0.5
        assert settings.strichartz_defaults.omegas == [10.0, 30.0, 100.0, 300.0, 1000.0]

    def test_yaml_overrides(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text(yaml.safe_dump({"runtime": {"threads": 4}, "verify_defaults": {"ensemble_size": 5}}))
        settings = LabSettings.load_from_yaml(path)
        assert settings.runtime.threads == 4
        assert settings.verify_defaults.ensemble_size == 5

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("REULAB_RUNTIME_THREADS", "3")
        assert RuntimeSettings().threads == 3

    def test_validation(self):
        assert LoggingSettings(level="debug").level == "DEBUG"
        with pytest.raises(ValidationError):
            StrichartzDefaults(r=2.0)
        with pytest.raises(ValidationError):
            RuntimeSettings(threads=0)
