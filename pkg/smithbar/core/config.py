"""
Centralized configuration management for smithbar.

This module provides utilities for accessing numerical settings consistently
across all modules instead of hardcoding tolerances, grid sizes and seeds.
Values are resolved from the stored configuration first, then from ``SB_*``
environment variables, then from the defaults at the bottom of this module.
"""

import os
from typing import Dict, Any, Callable, Optional

from .errors import SmithbarError


class ConfigError(SmithbarError):
    """Exception raised for configuration-related errors."""
    kind = 'ConfigError'


# Module-level config store, set once at startup via set_config()
_config: Dict[str, Any] = {}


def set_config(config: Dict[str, Any]) -> None:
    """Store the run configuration."""
    global _config
    _config = config


def reset_config() -> None:
    """Forget the stored configuration."""
    global _config
    _config = {}


def get_config() -> Dict[str, Any]:
    """
    Get the current configuration.

    Returns:
        Dict containing the configuration

    Raises:
        ConfigError: If configuration has not been set yet
    """
    if not _config:
        raise ConfigError(
            "Configuration not available. "
            "Call set_config() before accessing config values."
        )
    return _config


def get_config_value(key: str, default: Any = None) -> Any:
    """
    Get a specific configuration value.

    Args:
        key: Configuration key to retrieve
        default: Default value if key is not found

    Returns:
        Configuration value or default
    """
    try:
        value = get_config().get(key, default)
    except ConfigError:
        return default
    return default if value is None else value


def _resolve(key: str, env: str, default: Any, cast: Callable[[str], Any]) -> Any:
    value = get_config_value(key)
    if value is not None:
        return value
    raw = os.environ.get(env)
    if raw:
        try:
            return cast(raw)
        except ValueError as e:
            raise ConfigError(f"{env}={raw!r} is not a valid value") from e
    return default


def get_tolerance() -> float:
    """Eigenvalue zero-tolerance (env: SB_TOL)."""
    return _resolve('tol', 'SB_TOL', DEFAULT_TOL, float)


def get_residual_tolerance() -> float:
    """Pass threshold for identity residuals (env: SB_RESIDUAL_TOL)."""
    return _resolve('residual_tol', 'SB_RESIDUAL_TOL', DEFAULT_RESIDUAL_TOL, float)


def get_n0() -> int:
    """Block count of the elementary rotation tuple (env: SB_N0)."""
    return _resolve('n0', 'SB_N0', DEFAULT_N0, int)


def get_grid() -> int:
    """Number of sample points in action sweeps (env: SB_GRID)."""
    return _resolve('grid', 'SB_GRID', DEFAULT_GRID, int)


def get_seed() -> int:
    """Seed for randomized checks (env: SB_SEED)."""
    return _resolve('seed', 'SB_SEED', DEFAULT_SEED, int)


def resolve(value: Optional[Any], getter: Callable[[], Any]) -> Any:
    """Return ``value`` unless it is None, in which case ask ``getter``."""
    return getter() if value is None else value


def validate_config(config: Dict[str, Any]) -> None:
    """
    Validate numerical settings.

    Args:
        config: Configuration dictionary to validate

    Raises:
        ConfigError: If configuration is invalid
    """
    tol = config.get('tol', DEFAULT_TOL)
    if not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError(f"Tolerance must be positive, got {tol}")

    residual_tol = config.get('residual_tol', DEFAULT_RESIDUAL_TOL)
    if not isinstance(residual_tol, (int, float)) or residual_tol <= 0:
        raise ConfigError(f"Residual tolerance must be positive, got {residual_tol}")

    n0 = config.get('n0', DEFAULT_N0)
    if not isinstance(n0, int) or n0 < 4 or n0 % 2:
        raise ConfigError(f"n0 must be an even integer >= 4, got {n0}")

    grid = config.get('grid', DEFAULT_GRID)
    if not isinstance(grid, int) or grid < 3:
        raise ConfigError(f"Grid must have at least 3 points, got {grid}")

    seed = config.get('seed', DEFAULT_SEED)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"Seed must be a nonnegative integer, got {seed}")


# Constants for default values - centralized in one place
DEFAULT_TOL = 1e-9
DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_N0 = 4
DEFAULT_GRID = 401
DEFAULT_SEED = 0
