import sys
import os
import numpy as np
import pytest

# Add the project root directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def test_settings_path():
    return os.path.join(os.path.dirname(__file__), "config", "settings.yaml")


@pytest.fixture
def trials(test_settings_path):
    """Repetitions of the randomized acceptance checks (``acceptance.trials``)."""
    from zermelo.config.config_manager import ConfigManager

    return int(ConfigManager(config_path=test_settings_path).get_config("acceptance.trials", 20))
