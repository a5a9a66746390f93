"""Logging setup shared by the library and the command line"""

from enum import Enum
import logging

LOGGER_NAME = 'qfiso'
LOGGER = logging.getLogger(LOGGER_NAME)
SUB_LOGGER = lambda name: logging.getLogger(f"{LOGGER_NAME}.{name}")

LOG_FORMAT = ('%(asctime)s.%(msecs)03d [%(levelname)s] %(name)s %(module)s'
              ' %(funcName)s: %(message)s')
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class LogLevel(Enum):
    """Log levels accepted on the command line"""
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARN = logging.WARN
    ERROR = logging.ERROR
    FATAL = logging.FATAL

    def __str__(self):
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> 'LogLevel':
        """Level by case-insensitive name; ValueError otherwise"""
        try:
            return cls[text.strip().upper()]
        except KeyError as ex:
            raise ValueError(f"Invalid log level {text}") from ex


def configure_logging(loglevel: LogLevel, file: str = None):
    """Root handler at ERROR (to file or stderr), qfiso loggers at loglevel.

    Python warnings (numpy overflow, scipy LinAlgWarning) go through logging too.
    """
    kwargs = {'level': logging.ERROR, 'format': LOG_FORMAT, 'datefmt': DATE_FORMAT}
    if file:
        kwargs['filename'] = file
    logging.basicConfig(**kwargs)
    logging.captureWarnings(True)
    LOGGER.setLevel(loglevel.value)


def set_level(loglevel: LogLevel, sub_logger: str = None):
    """Change the level on the fly, for all of qfiso or one sub-logger"""
    target = SUB_LOGGER(sub_logger) if sub_logger else LOGGER
    target.setLevel(loglevel.value)
