"""
Configuration management for pmxml

Holds the settings every layer reads (namespace strictness, zero token,
output formatting, logging) and loads them from defaults, a JSON file,
PMXML_* environment variables and explicit overrides.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)


class PmxmlConfig(BaseModel):
    """
    Central configuration for pmxml

    Values can be overridden via environment variables or a JSON
    configuration file.
    """

    model_config = ConfigDict(validate_assignment=True)

    # Logging settings
    log_level: str = Field(
        default="WARNING",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    color: bool = Field(
        default=True,
        description="Colored diagnostics on standard error"
    )

    # Decode settings
    lax_namespace: bool = Field(
        default=False,
        description="Accept documents whose root declares no namespace"
    )

    validate_first: bool = Field(
        default=True,
        description="Validate against the grammar before decoding"
    )

    zero_token: str = Field(
        default="0",
        min_length=1,
        description="Fill token for sparse containers"
    )

    # Output settings
    indent: int = Field(
        default=2,
        ge=0,
        description="Indentation width of written XML"
    )

    json_indent: Optional[int] = Field(
        default=None,
        ge=0,
        description="Indentation of JSON output (None for compact)"
    )

    approx_digits: int = Field(
        default=12,
        ge=1,
        description="Significant digits of decimal approximations"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Ensure log level is valid"""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v = v.upper()
        if v not in valid_levels:
            raise ValueError(f"Log level must be one of: {', '.join(valid_levels)}")
        return v


ENV_MAPPINGS = {
    "PMXML_LOG_LEVEL": "log_level",
    "PMXML_COLOR": "color",
    "PMXML_LAX_NAMESPACE": "lax_namespace",
    "PMXML_VALIDATE_FIRST": "validate_first",
    "PMXML_ZERO_TOKEN": "zero_token",
    "PMXML_INDENT": "indent",
    "PMXML_JSON_INDENT": "json_indent",
    "PMXML_APPROX_DIGITS": "approx_digits",
}

_BOOL_FIELDS = {"color", "lax_namespace", "validate_first"}


def _convert_env_value(config_key: str, value: str) -> Any:
    """Convert an environment string to the field's type"""
    if config_key in _BOOL_FIELDS:
        lowered = value.lower()
        if lowered in ("true", "1", "yes"):
            return True
        if lowered in ("false", "0", "no"):
            return False
        return value
    if value.isdigit() and config_key != "zero_token":
        return int(value)
    return value


def load_config(config_file: Optional[Path] = None, **overrides: Any) -> PmxmlConfig:
    """
    Load configuration from defaults, a config file, the environment and overrides

    Priority order (highest to lowest):
    1. Explicit keyword overrides
    2. Environment variables (PMXML_*)
    3. JSON configuration file (argument, else PMXML_CONFIG)
    4. Default values

    Args:
        config_file: Path to a JSON configuration file
        **overrides: Field values that win over everything else

    Returns:
        PmxmlConfig: Loaded configuration
    """
    config_dict: dict[str, Any] = {}

    if config_file is None and os.environ.get("PMXML_CONFIG"):
        config_file = Path(os.environ["PMXML_CONFIG"])

    if config_file is not None and config_file.exists():
        with open(config_file, encoding="utf-8") as f:
            config_dict.update(json.load(f))
        logger.debug(f"Loaded configuration file {config_file}")

    for env_var, config_key in ENV_MAPPINGS.items():
        value = os.environ.get(env_var)
        if value is not None:
            config_dict[config_key] = _convert_env_value(config_key, value)

    config_dict.update({k: v for k, v in overrides.items() if v is not None})

    return PmxmlConfig(**config_dict)


# Global config instance (can be overridden by calling set_config)
_config: Optional[PmxmlConfig] = None


def get_config() -> PmxmlConfig:
    """
    Get the current configuration instance

    Returns:
        PmxmlConfig: Current configuration
    """
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(config: Optional[PmxmlConfig]) -> None:
    """
    Set the global configuration instance

    Args:
        config: Configuration to use, or None to reload lazily
    """
    global _config
    _config = config


def setup_logging(level: str = "WARNING", color: bool = True) -> None:
    """
    Route pmxml logging to standard error through rich

    Only the CLI calls this; library code never installs handlers.
    """
    from rich.console import Console
    from rich.logging import RichHandler

    handler = RichHandler(
        console=Console(stderr=True, no_color=not color, highlight=False),
        show_time=False,
        show_path=False,
        markup=False,
    )
    root = logging.getLogger("pmxml")
    for existing in list(root.handlers):
        if isinstance(existing, RichHandler):
            root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level.upper())
