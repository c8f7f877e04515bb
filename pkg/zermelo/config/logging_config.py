# config/logging_config.py

"""
This module sets up logging for the command-line front end.

Log messages go to both the console and a file. Library modules only emit
records; they never call this function themselves.
"""

import logging

LOG_OUTPUT_FILE = "zermelo.log"


def setup_logging(level: str = "INFO", log_file: str = LOG_OUTPUT_FILE) -> None:
    """
    Route log records to stderr and, optionally, a log file.

    Args:
        level (str): Name of the root log level, e.g. "INFO" or "DEBUG".
        log_file (str): Path of the log file; an empty value disables file output.
    """
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.insert(0, logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )
