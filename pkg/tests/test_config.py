import json

import pytest

from caliber_cli.config import (
    HOME_ENV,
    ConfigManager,
    SettingError,
    default_config_dir,
    resolve_jobs,
    validate_setting,
)


@pytest.fixture
def manager(tmp_path):
    return ConfigManager(config_dir=tmp_path / "cfg")


def test_defaults_without_file(manager):
    assert manager.get_settings() == ConfigManager.DEFAULT_SETTINGS
    assert manager.get_setting("jobs") == 1
    assert not manager.config_file.exists()


def test_set_setting_persists(manager):
    manager.set_setting("jobs", "4")
    manager.set_setting("format", "csv")
    stored = json.loads(manager.config_file.read_text())
    assert stored["settings"] == {"jobs": 4, "format": "csv"}
    assert ConfigManager(config_dir=manager.config_dir).get_setting("jobs") == 4


def test_reset_settings(manager):
    manager.set_setting("block_size", 128)
    manager.reset_settings()
    assert manager.get_setting("block_size") == 4096


def test_corrupt_file_falls_back_to_defaults(manager):
    manager.config_file.parent.mkdir(parents=True)
    manager.config_file.write_text("{not json")
    assert manager.get_setting("format") == "jsonl"


def test_home_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(HOME_ENV, str(tmp_path / "elsewhere"))
    assert default_config_dir() == tmp_path / "elsewhere"
    assert ConfigManager().config_file == tmp_path / "elsewhere" / "config.json"


class TestValidateSetting:
    def test_coerces_integers(self):
        assert validate_setting("block_size", "512") == 512

    @pytest.mark.parametrize("key, value", [
        ("jobs", 0),
        ("jobs", "-2"),
        ("split_prime_cutoff", "ten"),
        ("format", "xml"),
        ("colour", "red"),
    ])
    def test_rejects(self, key, value):
        with pytest.raises(SettingError):
            validate_setting(key, value)


class TestResolveJobs:
    def test_option_wins(self, manager, monkeypatch):
        monkeypatch.setenv("CALIBER_JOBS", "3")
        manager.set_setting("jobs", 2)
        assert resolve_jobs(5, manager) == 5

    def test_environment_beats_config(self, manager, monkeypatch):
        monkeypatch.setenv("CALIBER_JOBS", "3")
        manager.set_setting("jobs", 2)
        assert resolve_jobs(None, manager) == 3

    def test_config_last(self, manager):
        manager.set_setting("jobs", 2)
        assert resolve_jobs(None, manager) == 2

    def test_invalid_environment(self, manager, monkeypatch):
        monkeypatch.setenv("CALIBER_JOBS", "zero")
        with pytest.raises(SettingError):
            resolve_jobs(None, manager)
