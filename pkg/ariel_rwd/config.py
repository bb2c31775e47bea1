"""
Configuration handling for ariel-rwd.
"""

import copy
import logging
import os

import toml


DEFAULTS: dict[str, object] = {
    "logging": {
        "level": "INFO",
        "log_dir": "log",
        "keep": 7,
    },
    "gspn": {
        "tolerance": 1e-10,
        "state_cap": 100000,
        "direct_solver_limit": 2000,
        "max_iterations": 200000,
    },
    "simulation": {
        "timeout_factor": 2.0,
        "reboot_delay_ms": 0.0,
        "counter_persistent": True,
        "replications": 10,
        "workers": 1,
    },
    "rwd": {
        "n_replicas": 3,
        "rate_activity": 2.0,
        "rate_fault": 0.1,
        "rate_cycle": 1.0,
        "rate_repair": 1.0,
        "timeout_rates": [0.5, 1.0, 2.0],
        "policies": ["AND", "OR"],
        "mc_horizon": 2000.0,
        "mc_replications": 30,
        "mc_warmup": 100.0,
        "workers": 1,
    },
}


def _merge(base: dict, override: dict) -> dict:
    """Recursively merge `override` into a copy of `base`."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Config:
    """
    Configuration manager for the application.

    Built-in defaults are overlaid with the sections of a TOML file, when one
    is given. Command-line flags are applied on top by the command handlers.
    """

    def __init__(self, config_file: str | None = None):
        """
        Initialize the configuration manager and load the configuration file.

        Args:
            config_file: Path to a TOML configuration file, or None for defaults only

        Raises:
            FileNotFoundError: If an explicit configuration file doesn't exist
            ValueError: If the file is not valid TOML
        """
        self.config_file = config_file
        self.config_data: dict[str, object] = copy.deepcopy(DEFAULTS)

        if config_file is not None:
            self._load_config()

    def _load_config(self) -> None:
        """
        Load the configuration from the specified file.

        Raises:
            FileNotFoundError: If the configuration file doesn't exist
            ValueError: If there's an error parsing the configuration
        """
        if not os.path.exists(self.config_file):
            logging.error(f"Configuration file not found: {self.config_file}")
            raise FileNotFoundError(f"Configuration file not found: {self.config_file}")

        try:
            logging.info(f"Loading configuration from {self.config_file}")
            loaded = toml.load(self.config_file)
        except toml.TomlDecodeError as e:
            logging.error(f"Error loading configuration: {e}", exc_info=True)
            raise ValueError(f"Error loading configuration {self.config_file}: {e}") from e

        self.config_data = _merge(DEFAULTS, loaded)
        logging.debug("Loaded config sections: %s", list(self.config_data.keys()))

    def get(self, key_path: str, default: object = None) -> object:
        """
        Get a configuration value by its dot-notation path.

        Args:
            key_path: Dot-notation path to the configuration value (e.g., "gspn.tolerance")
            default: Default value to return if the key doesn't exist

        Returns:
            The configuration value, or the default if not found
        """
        current: object = self.config_data

        for part in key_path.split("."):
            if isinstance(current, dict) and part in current:
                current = current[part]
            else:
                return default

        return current

    def section(self, name: str) -> dict[str, object]:
        """Return a copy of one top-level section (empty dict if absent)."""
        value = self.config_data.get(name, {})
        return dict(value) if isinstance(value, dict) else {}
