#!/usr/bin/env python3
"""
Unit tests for configuration validation and loading
"""

import json

import pytest
from pydantic import ValidationError

import config_validation
from config_validation import (
    DisplayConfig,
    LevarConfig,
    SelfTestConfig,
    TabulationConfig,
    get_active_config,
    get_default_config,
    load_config,
    set_active_config,
    validate_config,
)
from exceptions import InvalidConfigurationError


class TestDefaults:
    """Test default configuration values"""

    def test_defaults(self):
        config = get_default_config()
        assert config.tabulation.max_workers == 4
        assert config.tabulation.parallel_threshold == 4096
        assert config.display.preview_elements == 16
        assert config.selftest.seed == 1
        assert config.selftest.io_oi_max_prod == 1024
        assert config.selftest.nest_max_prod == 256
        assert config.selftest.pooling_cases == 200
        assert config.selftest.pooling_max_extent == 16
        assert config.selftest.matmul_cases == 500
        assert config.selftest.matmul_max_dim == 5
        assert config.selftest.format_cases == 100

    def test_to_dict_is_flat(self):
        flat = get_default_config().to_dict()
        assert flat["max_workers"] == 4
        assert flat["max_blocks"] == 64
        assert flat["law_max_prod"] == 64


class TestValidation:
    """Test pydantic validation of sections"""

    def test_worker_bounds(self):
        with pytest.raises(ValidationError):
            TabulationConfig(max_workers=0)
        with pytest.raises(ValidationError):
            TabulationConfig(max_workers=65)

    def test_negative_preview_rejected(self):
        with pytest.raises(ValidationError):
            DisplayConfig(preview_elements=-1)

    def test_odd_pooling_extent_rejected(self):
        with pytest.raises(ValidationError, match="must be even"):
            LevarConfig(selftest=SelfTestConfig(pooling_max_extent=7))

    def test_from_flat_dict(self):
        config = LevarConfig.from_dict({"max_workers": 2, "seed": 9})
        assert config.tabulation.max_workers == 2
        assert config.selftest.seed == 9

    def test_from_sectioned_dict(self):
        config = LevarConfig.from_dict({"display": {"max_blocks": 3}, "selftest": {"matmul_cases": 5}})
        assert config.display.max_blocks == 3
        assert config.selftest.matmul_cases == 5

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="Unknown configuration parameter"):
            LevarConfig.from_dict({"threads": 2})

    def test_validate_config_wraps_errors(self):
        with pytest.raises(InvalidConfigurationError) as exc_info:
            validate_config({"max_workers": "many"}, source="test")
        assert exc_info.value.source == "test"

    def test_validate_config(self):
        assert validate_config({"parallel_threshold": 10}).tabulation.parallel_threshold == 10


class TestLoading:
    """Test loading configuration files"""

    def test_load_json(self, tmp_path):
        path = tmp_path / "levar.json"
        path.write_text(json.dumps({"tabulation": {"max_workers": 2}}))
        assert load_config(str(path)).tabulation.max_workers == 2

    def test_load_yaml(self, tmp_path):
        pytest.importorskip("yaml")
        path = tmp_path / "levar.yaml"
        path.write_text("selftest:\n  seed: 5\n  pooling_cases: 10\n")
        config = load_config(str(path))
        assert config.selftest.seed == 5
        assert config.selftest.pooling_cases == 10

    def test_empty_yaml_gives_defaults(self, tmp_path):
        pytest.importorskip("yaml")
        path = tmp_path / "empty.yml"
        path.write_text("")
        assert load_config(str(path)) == get_default_config()

    def test_yaml_without_pyyaml(self, tmp_path, monkeypatch):
        monkeypatch.setattr(config_validation, "YAML_AVAILABLE", False)
        path = tmp_path / "levar.yaml"
        path.write_text("seed: 1\n")
        with pytest.raises(InvalidConfigurationError, match="PyYAML"):
            load_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidConfigurationError, match="file not found"):
            load_config(str(tmp_path / "nope.json"))

    def test_unsupported_extension(self, tmp_path):
        path = tmp_path / "levar.toml"
        path.write_text("seed = 1\n")
        with pytest.raises(InvalidConfigurationError, match="Unsupported file extension"):
            load_config(str(path))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{")
        with pytest.raises(InvalidConfigurationError):
            load_config(str(path))

    def test_top_level_must_be_mapping(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(InvalidConfigurationError, match="mapping"):
            load_config(str(path))

    def test_invalid_value_in_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"max_workers": 0}))
        with pytest.raises(InvalidConfigurationError):
            load_config(str(path))


class TestActiveConfig:
    """Test the library-wide active configuration"""

    def test_defaults_when_unset(self):
        assert get_active_config() == get_default_config()

    def test_set_and_reset(self):
        custom = LevarConfig(tabulation=TabulationConfig(max_workers=1))
        set_active_config(custom)
        assert get_active_config() is custom
        set_active_config(None)
        assert get_active_config().tabulation.max_workers == 4
