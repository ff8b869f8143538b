import logging
import os
import sys

from src.global_constants import LOG_DIR, ALL_LOGS_FILE


def get_basic_formatter() -> logging.Formatter:
    """Gets a basic logging formatter."""
    basic_format_string = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    return logging.Formatter(basic_format_string)


class LogDirFileHandler(logging.FileHandler):
    """A file handler that creates its directory on the first emitted record."""

    def _open(self):
        os.makedirs(os.path.dirname(self.baseFilename), exist_ok=True)
        return super()._open()


def get_file_handler(filename: str) -> LogDirFileHandler:
    """Gets a lazily opened handler writing to <filename> in the log directory.

    :param filename: name of the log file, e.g. 'quad_forms.log'
    """
    handler = LogDirFileHandler(os.path.join(LOG_DIR, filename), delay=True)
    handler.setFormatter(get_basic_formatter())
    return handler


def config_loggers(verbose: bool = False) -> None:
    logging.basicConfig(filename=ALL_LOGS_FILE, level=logging.INFO,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.INFO)

    # Warnings and worse always reach the terminal.
    warn_handler = logging.StreamHandler(sys.stderr)
    warn_handler.setFormatter(get_basic_formatter())
    warn_handler.setLevel(logging.INFO if verbose else logging.WARN)
    root_logger.addHandler(warn_handler)
