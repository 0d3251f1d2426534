# utils/logger.py
import logging
import os
from datetime import datetime

from config.settings import settings

def get_logger(name):
    logger = logging.getLogger(name)

    if not logger.handlers:
        level = getattr(logging, settings.LOG_LEVEL, logging.INFO)

        # Create logs directory if it doesn't exist
        log_dir = settings.LOG_DIR
        if not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        logger.setLevel(level)
        logger.propagate = False

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # File handler
        log_file = os.path.join(log_dir, f"rigidlab_{datetime.now().strftime('%Y%m%d')}.log")
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        # Console handler on stderr; stdout carries command output
        if settings.LOG_TO_CONSOLE:
            console_handler = logging.StreamHandler()
            console_handler.setLevel(max(level, logging.WARNING))
            console_handler.setFormatter(formatter)
            logger.addHandler(console_handler)

    return logger
