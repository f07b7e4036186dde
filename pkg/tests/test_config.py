"""
Tests for the configuration loader.
"""

import json
import logging

import pytest

from src import config
from src.config import DEFAULT_CONFIG, get_config, load_config, setting


class TestLoadConfig:

    def test_missing_file_falls_back_to_defaults(self, tmp_path, monkeypatch, caplog):
        for name in config.ENV_OVERRIDES:
            monkeypatch.delenv(name, raising=False)
        with caplog.at_level(logging.WARNING, logger="src.config"):
            loaded = load_config(str(tmp_path / "missing.json"))
        assert loaded["exact_cap"] == DEFAULT_CONFIG["exact_cap"]
        assert loaded["default_budget"] is None
        assert "not found" in caplog.text

    def test_file_values_merge_into_nested_blocks(self, tmp_path, monkeypatch):
        for name in config.ENV_OVERRIDES:
            monkeypatch.delenv(name, raising=False)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"occam_C": 8, "reduced_constants": {"depth_cap_factor": 16}}))
        loaded = load_config(str(path))
        assert loaded["occam_C"] == 8
        assert loaded["reduced_constants"] == {"depth_cap_factor": 16, "width": "projected"}
        assert DEFAULT_CONFIG["reduced_constants"]["depth_cap_factor"] == 64

    def test_environment_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DTLAB_EXACT_CAP", "12")
        monkeypatch.setenv("DTLAB_DEFAULT_BUDGET", "5000")
        loaded = load_config(str(tmp_path / "missing.json"))
        assert loaded["exact_cap"] == 12
        assert loaded["default_budget"] == 5000

    @pytest.mark.parametrize("raw", ["zero", "0", "-3"])
    def test_invalid_environment_value(self, tmp_path, monkeypatch, raw):
        monkeypatch.setenv("DTLAB_INTERPOLATION_CAP", raw)
        with pytest.raises(ValueError, match="DTLAB_INTERPOLATION_CAP"):
            load_config(str(tmp_path / "missing.json"))

    def test_shipped_file_matches_fallback(self, monkeypatch):
        for name in config.ENV_OVERRIDES:
            monkeypatch.delenv(name, raising=False)
        shipped = load_config(str(config.REPO_ROOT / "config" / "dtlab_config.json"))
        assert {k: v for k, v in shipped.items() if k != "default_budget"} == DEFAULT_CONFIG


class TestSetting:

    def test_cached_and_reloadable(self, fresh_config, monkeypatch):
        monkeypatch.setenv("DTLAB_EXACT_CAP", "10")
        assert setting("exact_cap") == 10
        monkeypatch.setenv("DTLAB_EXACT_CAP", "11")
        assert setting("exact_cap") == 10
        get_config.cache_clear()
        assert setting("exact_cap") == 11
