# config/config_manager.py

"""
This module provides the ConfigManager class for managing zermelo settings.

Settings are layered: the packaged defaults in ``zermelo/config/settings.yaml``
are loaded first, then overridden by a user file, a dictionary, or keyword args.

Example usage
  config = ConfigManager(config_path="path/to/settings.yaml")
  config = ConfigManager(config={"verify": {"samples": 50}})
  config = ConfigManager(geodesic={"dt": 5.0e-4})
  dt = config.get_config("geodesic.dt")
"""

import copy
import logging
import os
from typing import Any, Dict, Optional
import yaml

DEFAULT_SETTINGS_PATH = os.path.join(os.path.dirname(__file__), "settings.yaml")


def _load_yaml(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as file:
        return yaml.safe_load(file) or {}


def merge_settings(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """
    Recursively merge ``override`` into a copy of ``base``.

    Args:
        base (Dict[str, Any]): The default settings.
        override (Dict[str, Any]): Settings that take precedence.

    Returns:
        Dict[str, Any]: The merged settings.
    """
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_settings(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigManager:
    """
    Layered zermelo settings with dot-path lookup.

    Supports initialization from a file, a dictionary, or keyword arguments,
    always on top of the packaged defaults.
    """

    # pylint: disable=too-few-public-methods

    def __init__(
        self,
        config_path: Optional[str] = None,
        config: Optional[Dict[str, Any]] = None,
        use_defaults: bool = True,
        **kwargs,
    ):
        self.config: Dict[str, Any] = (
            _load_yaml(DEFAULT_SETTINGS_PATH) if use_defaults else {}
        )
        if config_path:
            self._init_from_file(config_path)
        elif config:
            self._init_from_dict(config)
        else:
            self._init_from_kwargs(**kwargs)

    def _init_from_file(self, config_path: str) -> None:
        """
        Overlay settings from a YAML file.

        Args:
            config_path (str): YAML file with overriding settings.
        """
        logging.info("Loading settings from %s", config_path)
        self.config = merge_settings(self.config, _load_yaml(config_path))

    def _init_from_dict(self, config_dict: Dict[str, Any]) -> None:
        """
        Overlay settings from a dictionary.

        Args:
            config_dict (Dict[str, Any]): Nested overriding settings.
        """
        self.config = merge_settings(self.config, config_dict)

    def _init_from_kwargs(self, **kwargs) -> None:
        """
        Overlay settings from keyword arguments.

        Args:
            **kwargs: Top-level settings sections.
        """
        self.config = merge_settings(self.config, kwargs)

    def get_config(self, path: str, default: Any = None) -> Any:
        """
        Look up a setting such as ``"verify.tol"``.

        Args:
            path (str): Dot-separated key path.
            default (Any): Returned when any key along the path is missing.

        Returns:
            Any: The setting, or ``default``.
        """
        value: Any = self.config
        for key in path.split("."):
            if not isinstance(value, dict) or key not in value:
                return default
            value = value[key]
        return value
