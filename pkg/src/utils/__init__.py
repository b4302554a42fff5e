"""Utils モジュール"""
from .config_manager import ConfigManager
from .logging_manager import LoggingManager
from .errors import (
    LogPrepError,
    ConfigError,
    MissingGraphError,
    FixtureSpecError,
    InputFormatError,
    EmptyInputError,
    MissingFieldsDirectiveError,
    MalformedEdgeLineError,
    LogIOError,
    InvariantViolationError,
)

__all__ = [
    'ConfigManager',
    'LoggingManager',
    'LogPrepError',
    'ConfigError',
    'MissingGraphError',
    'FixtureSpecError',
    'InputFormatError',
    'EmptyInputError',
    'MissingFieldsDirectiveError',
    'MalformedEdgeLineError',
    'LogIOError',
    'InvariantViolationError',
]
