# zermelo/config/__init__.py

from .logging_config import setup_logging
from .config_manager import ConfigManager
