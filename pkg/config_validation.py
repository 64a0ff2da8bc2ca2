#!/usr/bin/env python3
"""
Configuration validation using Pydantic

This module provides validated configuration schemas for tabulation,
display and the property self-test, plus loading from JSON or YAML files.
"""

import json
import logging
import os
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from exceptions import InvalidConfigurationError

# Try to import yaml, but make it optional
try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

logger = logging.getLogger(__name__)


# ===============================================================================
# SECTIONS
# ===============================================================================

class TabulationConfig(BaseModel):
    """How delayed arrays are materialized"""

    max_workers: int = Field(
        default=4,
        ge=1,
        le=64,
        description="Worker threads used to tabulate large delayed arrays"
    )

    parallel_threshold: int = Field(
        default=4096,
        ge=1,
        description="Minimum element count before tabulation goes parallel"
    )


class DisplayConfig(BaseModel):
    """How the CLI previews arrays"""

    preview_elements: int = Field(
        default=16,
        ge=0,
        description="Number of leading elements printed by 'show'"
    )

    max_blocks: int = Field(
        default=64,
        ge=1,
        description="Maximum number of inner blocks printed by 'nest'"
    )


class SelfTestConfig(BaseModel):
    """Sizes of the property suites run by 'selftest'"""

    seed: int = Field(default=1, ge=0, description="Seed for randomized suites")

    io_oi_max_prod: int = Field(
        default=1024,
        ge=1,
        description="Largest shape (in elements) checked by the index/offset suite"
    )

    nest_max_prod: int = Field(
        default=256,
        ge=1,
        description="Largest shape (in elements) checked by the nesting suites"
    )

    law_max_prod: int = Field(
        default=64,
        ge=1,
        description="Largest shape (in elements) used for functor and reshape laws"
    )

    pooling_cases: int = Field(default=200, ge=1, le=100000)

    pooling_max_extent: int = Field(
        default=16,
        ge=2,
        description="Largest (even) extent of random pooling inputs"
    )

    matmul_cases: int = Field(default=500, ge=1, le=100000)

    matmul_max_dim: int = Field(default=5, ge=1, le=64)

    format_cases: int = Field(default=100, ge=1, le=100000)


# ===============================================================================
# MAIN CONFIGURATION
# ===============================================================================

class LevarConfig(BaseModel):
    """Complete validated library configuration"""

    tabulation: TabulationConfig = Field(default_factory=TabulationConfig)
    display: DisplayConfig = Field(default_factory=DisplayConfig)
    selftest: SelfTestConfig = Field(default_factory=SelfTestConfig)

    @model_validator(mode='after')
    def validate_config_consistency(self):
        """Validate that configuration is internally consistent"""
        if self.selftest.pooling_max_extent % 2:
            raise ValueError(
                f"pooling_max_extent ({self.selftest.pooling_max_extent}) must be even"
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Convert to flat dictionary"""
        result: Dict[str, Any] = {}
        for section in (self.tabulation, self.display, self.selftest):
            result.update(section.model_dump())
        return result

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "LevarConfig":
        """
        Create from either a flat dictionary or a sectioned one
        (``{"tabulation": {...}, "display": {...}, "selftest": {...}}``).
        """
        sections: Dict[str, Dict[str, Any]] = {"tabulation": {}, "display": {}, "selftest": {}}
        owners = {
            **{key: "tabulation" for key in TabulationConfig.model_fields},
            **{key: "display" for key in DisplayConfig.model_fields},
            **{key: "selftest" for key in SelfTestConfig.model_fields},
        }

        for key, value in config_dict.items():
            if key in sections and isinstance(value, dict):
                sections[key].update(value)
            elif key in owners:
                sections[owners[key]][key] = value
            else:
                raise ValueError(f"Unknown configuration parameter '{key}'")

        return cls(
            tabulation=TabulationConfig(**sections["tabulation"]),
            display=DisplayConfig(**sections["display"]),
            selftest=SelfTestConfig(**sections["selftest"]),
        )


# ===============================================================================
# UTILITY FUNCTIONS
# ===============================================================================

_active_config: Optional[LevarConfig] = None


def validate_config(config_dict: Dict[str, Any], source: str = "<dict>") -> LevarConfig:
    """
    Validate a configuration dictionary.

    Raises:
        InvalidConfigurationError: If configuration is invalid

    Example:
        >>> validated = validate_config({"max_workers": 2})
        >>> validated.tabulation.max_workers
        2
    """
    try:
        return LevarConfig.from_dict(config_dict)
    except (ValidationError, ValueError, TypeError) as e:
        raise InvalidConfigurationError(source, str(e)) from e


def load_config(path: str) -> LevarConfig:
    """
    Load a configuration file (.json always, .yaml/.yml when PyYAML is installed).

    Raises:
        InvalidConfigurationError: If the file is missing, unreadable or invalid
    """
    if not os.path.exists(path):
        raise InvalidConfigurationError(path, "file not found")

    try:
        with open(path, 'r', encoding='utf-8') as f:
            if path.endswith('.json'):
                data = json.load(f)
            elif path.endswith(('.yaml', '.yml')):
                if not YAML_AVAILABLE:
                    raise InvalidConfigurationError(
                        path,
                        "PyYAML is required to load YAML files. Install with: pip install pyyaml"
                    )
                data = yaml.safe_load(f) or {}
            else:
                raise InvalidConfigurationError(
                    path, "Unsupported file extension. Use .json, .yaml or .yml"
                )
    except json.JSONDecodeError as e:
        raise InvalidConfigurationError(path, str(e)) from e
    except OSError as e:
        raise InvalidConfigurationError(path, f"IO error: {e}") from e
    except Exception as e:
        if YAML_AVAILABLE and isinstance(e, yaml.YAMLError):
            raise InvalidConfigurationError(path, str(e)) from e
        raise

    if not isinstance(data, dict):
        raise InvalidConfigurationError(path, "top level must be a mapping")

    config = validate_config(data, source=path)
    logger.info(f"Loaded configuration '{path}'")
    return config


def get_default_config() -> LevarConfig:
    """Get default configuration"""
    return LevarConfig()


def get_active_config() -> LevarConfig:
    """Configuration used by library defaults (tabulation workers, thresholds)"""
    global _active_config
    if _active_config is None:
        _active_config = get_default_config()
    return _active_config


def set_active_config(config: Optional[LevarConfig]) -> None:
    """Install ``config`` as the library default; ``None`` restores the defaults"""
    global _active_config
    _active_config = config
