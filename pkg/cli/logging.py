from datetime import datetime
from enum import Enum
import logging
import sys


class LogLevel(Enum):
    DEBUG = 0
    INFO = 1
    WARN = 2
    ERROR = 3


COLORS = {
    LogLevel.DEBUG: "\x1b[90m",
    LogLevel.INFO: "\x1b[34m",
    LogLevel.WARN: "\x1b[93m",
    LogLevel.ERROR: "\x1b[31m",
}


class _Logger:
    # Name assigned to each process, used to log the process name
    process_name: str = "main"
    # Messages below this level are dropped
    level: LogLevel = LogLevel.INFO

    def set_process(self, name: str):
        self.process_name = name

    def set_level(self, level: LogLevel):
        self.level = level

    def log(self, level: LogLevel, message: str):
        """
        Logs a message with the given level in the format
        "[TIMESTAMP LEVEL - PROCESS_NAME] [MESSAGE]" on standard error,
        leaving standard output to the reports.
        """
        if level.value < self.level.value:
            return
        print(
            COLORS[level]
            + f"[{datetime.now():%H:%M:%S} "
            f"{level.name} - "
            f"{self.process_name:>3}] {message}"
            "\x1b[0m",
            file=sys.stderr,
        )

    def info(self, message: str):
        self.log(LogLevel.INFO, message)

    def debug(self, message: str):
        self.log(LogLevel.DEBUG, message)

    def warn(self, message: str):
        self.log(LogLevel.WARN, message)

    def error(self, message: str):
        self.log(LogLevel.ERROR, message)


# The logger is a singleton global variable.
# Each process will clone it in the forking process and have its own copy.
Logger = _Logger()


class LoggerBridge(logging.Handler):
    """ Forwards the library's `homext.*` records to `Logger`. """

    def emit(self, record: logging.LogRecord):
        if record.levelno >= logging.ERROR:
            level = LogLevel.ERROR
        elif record.levelno >= logging.WARNING:
            level = LogLevel.WARN
        elif record.levelno >= logging.INFO:
            level = LogLevel.INFO
        else:
            level = LogLevel.DEBUG
        Logger.log(level, f"{record.name}: {record.getMessage()}")


def install(verbose: bool = False):
    """ Routes library logging to `Logger`; `verbose` lets debug messages through. """
    Logger.set_level(LogLevel.DEBUG if verbose else LogLevel.INFO)
    root = logging.getLogger("homext")
    root.handlers = [LoggerBridge()]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False
