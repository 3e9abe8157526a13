"""
Configuration management for caliber-cli.

This module handles persistent storage of user settings such as the default
worker count, the scan block size and the output format.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

# Environment variable overriding the configuration directory
HOME_ENV = "CALIBER_CLI_HOME"
# Environment variable for the default job count
JOBS_ENV = "CALIBER_JOBS"

OUTPUT_FORMATS = ("jsonl", "csv")


class SettingError(ValueError):
    """Raised when a setting key is unknown or its value is invalid."""
    pass


def default_config_dir() -> Path:
    """~/.caliber_cli, or the directory named by CALIBER_CLI_HOME."""
    override = os.environ.get(HOME_ENV)
    return Path(override) if override else Path.home() / ".caliber_cli"


class ConfigManager:
    """
    Manages persistent configuration for the CLI application.

    Configuration is stored in JSON format at ~/.caliber_cli/config.json.
    Nothing is written until a setting is changed.

    Example:
        >>> config = ConfigManager()
        >>> config.set_setting("jobs", 4)
        >>> config.get_setting("jobs")
        4
    """

    DEFAULT_SETTINGS = {
        "jobs": 1,
        "block_size": 4096,
        "format": "jsonl",
        "split_prime_cutoff": 100,
    }

    def __init__(self, config_dir: Optional[Path] = None, config_file: Optional[Path] = None):
        """
        Initialize the configuration manager.

        Args:
            config_dir: Optional custom configuration directory path.
            config_file: Optional custom configuration file path.
        """
        self._config_dir = config_dir
        self._config_file = config_file

    @property
    def config_dir(self) -> Path:
        return self._config_dir or default_config_dir()

    @property
    def config_file(self) -> Path:
        return self._config_file or self.config_dir / "config.json"

    def _load_config(self) -> Dict:
        """
        Load configuration from the JSON file.

        Returns:
            Dictionary containing the configuration, or empty dict if the
            file is missing or unreadable.
        """
        try:
            with open(self.config_file, 'r') as f:
                return json.load(f)
        except (FileNotFoundError, json.JSONDecodeError):
            return {}

    def _save_config(self, config: Dict) -> None:
        """Save configuration to the JSON file, creating its directory."""
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, 'w') as f:
            json.dump(config, f, indent=4)

    def get_settings(self) -> Dict:
        """
        Get all settings, merged with defaults.

        Returns:
            Dictionary of all settings with defaults applied.
        """
        settings = self._load_config().get("settings", {})
        return {**self.DEFAULT_SETTINGS, **settings}

    def get_setting(self, key: str, default=None):
        """
        Get a specific setting value.

        Args:
            key: The setting key.
            default: Default value if not found (uses DEFAULT_SETTINGS if None).

        Returns:
            The setting value.
        """
        if default is None:
            default = self.DEFAULT_SETTINGS.get(key)
        return self.get_settings().get(key, default)

    def set_setting(self, key: str, value: Any) -> None:
        """
        Validate and store a setting.

        Raises:
            SettingError: If the key is unknown or the value invalid.
        """
        value = validate_setting(key, value)
        config = self._load_config()
        config.setdefault("settings", {})[key] = value
        self._save_config(config)

    def reset_settings(self) -> None:
        """Reset all settings to defaults."""
        config = self._load_config()
        config["settings"] = dict(self.DEFAULT_SETTINGS)
        self._save_config(config)


def validate_setting(key: str, value: Any) -> Any:
    """
    Coerce a raw setting value to its stored type.

    Args:
        key: One of ConfigManager.DEFAULT_SETTINGS.
        value: The value, possibly a string from the command line.

    Returns:
        A positive int for numeric settings, a known format name for "format".

    Raises:
        SettingError: If the key is unknown or the value invalid.
    """
    if key not in ConfigManager.DEFAULT_SETTINGS:
        raise SettingError(f"unknown setting '{key}'; known: {', '.join(ConfigManager.DEFAULT_SETTINGS)}")
    if key == "format":
        if value not in OUTPUT_FORMATS:
            raise SettingError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{value}'")
        return value
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise SettingError(f"{key} must be a positive integer, got '{value}'") from None
    if number < 1:
        raise SettingError(f"{key} must be a positive integer, got {number}")
    return number


def resolve_jobs(option: Optional[int], config: ConfigManager) -> int:
    """
    The worker count: the --jobs option, then CALIBER_JOBS, then the config.

    Raises:
        SettingError: If the chosen value is not a positive integer.
    """
    if option is not None:
        return validate_setting("jobs", option)
    env = os.environ.get(JOBS_ENV)
    if env:
        return validate_setting("jobs", env)
    return validate_setting("jobs", config.get_setting("jobs"))
