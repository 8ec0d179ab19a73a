"""Configuration and error types shared by every module."""

from .errors import SmithbarError, InputError
from .config import ConfigError, get_config_value, set_config

__all__ = [
    'SmithbarError',
    'InputError',
    'ConfigError',
    'get_config_value',
    'set_config',
]
