# logging_helper.py

import sys
import time
import logging
import os
from typing import Optional


def setup_logging(log_file: Optional[str] = None, level=logging.INFO) -> logging.Logger:
    """
    Sets up logging to stderr and, optionally, a file with consistent formatting.

    Standard output is left alone: the CLI writes its JSON results there.

    Args:
        log_file (Optional[str]): The log file path. No file handler when empty.
        level (int): The logging level (e.g., logging.INFO).

    Returns:
        logging.Logger: Configured logger instance.
    """
    # Clear any existing handlers
    logging.getLogger().handlers = []

    logger = logging.getLogger()
    logger.setLevel(level)

    # ISO8601 formatter for both file and stream logs
    formatter = logging.Formatter(
        '%(asctime)s %(levelname)s [%(module)s]: %(message)s',
        datefmt='%Y-%m-%dT%H:%M:%SZ'
    )

    # Use UTC time for logs
    logging.Formatter.converter = time.gmtime

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        file_handler.setLevel(level)
        logger.addHandler(file_handler)

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    stream_handler.setLevel(level)
    logger.addHandler(stream_handler)

    return logger
