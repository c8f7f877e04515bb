# tests/test_config_manager.py

import pytest
from zermelo.config import ConfigManager
from zermelo.config.config_manager import merge_settings


def test_config_manager_defaults():
    config_manager = ConfigManager()
    assert config_manager.get_config("numerics.tol_eig") == pytest.approx(1.0e-9)
    assert config_manager.get_config("verify.samples") == 100
    assert config_manager.get_config("sampling.seed") == 0


def test_config_manager_init_from_file():
    config_manager = ConfigManager(config_path="zermelo/tests/config/settings.yaml")
    assert config_manager.get_config("verify.samples") == 12
    assert config_manager.get_config("logging.file") == ""
    assert config_manager.get_config("acceptance.trials") == 20
    # untouched defaults survive the overlay
    assert config_manager.get_config("verify.min_margin") == pytest.approx(0.2)


def test_config_manager_init_from_dict():
    config_manager = ConfigManager(config={"geodesic": {"dt": 5.0e-4}})
    assert config_manager.get_config("geodesic.dt") == pytest.approx(5.0e-4)
    assert config_manager.get_config("geodesic.t_end") == pytest.approx(1.0)


def test_config_manager_init_from_kwargs():
    config_manager = ConfigManager(sampling={"seed": 42})
    assert config_manager.get_config("sampling.seed") == 42


def test_config_manager_missing_path_returns_default():
    config_manager = ConfigManager()
    assert config_manager.get_config("numerics.missing") is None
    assert config_manager.get_config("nothing.here", default=3) == 3


def test_config_manager_without_defaults():
    config_manager = ConfigManager(config={"a": 1}, use_defaults=False)
    assert config_manager.get_config("a") == 1
    assert config_manager.get_config("numerics") is None


def test_merge_settings_is_recursive_and_copies():
    base = {"x": {"y": 1, "z": 2}}
    merged = merge_settings(base, {"x": {"y": 5}})
    assert merged == {"x": {"y": 5, "z": 2}}
    assert base["x"]["y"] == 1
