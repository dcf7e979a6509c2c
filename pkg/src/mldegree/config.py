# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Solver configuration
"""
import os
from os import R_OK, access
from os.path import isfile
from typing import Any, Optional

import importlib_resources
from attrs import field, frozen

from mldegree.converter import CONVERTER
from mldegree.errors import MlDegreeError

# We read this environment variable to find the configuration YAML file on disk
CONFIG_VAR = "MLDEGREE_CONFIG_PATH"

# When the environment variable is not set, we fall back on the packaged defaults
DEFAULT_CONFIG = "application.yaml"


@frozen
class ConfigError(MlDegreeError):
    """An error related to configuration."""

    message: str


def _positive(_instance: object, attribute: Any, value: float) -> None:
    if not value > 0:
        raise ConfigError("Configuration value %s must be positive, got %s" % (attribute.name, value))


@frozen
class ToleranceConfig:
    """Numeric tolerances, all relative."""

    convergence: float = field(default=1.0e-13, validator=_positive)
    residual: float = field(default=1.0e-9, validator=_positive)
    cluster: float = field(default=1.0e-7, validator=_positive)
    discard: float = field(default=1.0e-9, validator=_positive)
    singular: float = field(default=1.0e-10, validator=_positive)
    max_iterations: int = field(default=200, validator=_positive)


@frozen
class SolverConfig:
    """Numeric solver configuration."""

    seed: int = 0
    generic_samples: int = field(default=3, validator=_positive)
    tolerances: ToleranceConfig = field(factory=ToleranceConfig)


@frozen
class MlDegreeConfig:
    """Application configuration."""

    solver: SolverConfig = field(factory=SolverConfig)


_CONFIG: Optional[MlDegreeConfig] = None


def _replace_envvars(source: str) -> str:
    """Replace constructs like {VAR} with environment variables."""
    return source.format(**os.environ)


def _read_default() -> str:
    return importlib_resources.files("mldegree.data").joinpath(DEFAULT_CONFIG).read_text(encoding="utf8")


def _load_config(config_path: Optional[str] = None) -> MlDegreeConfig:
    """Load configuration from disk, substituting environment variables of the form {VAR}."""
    if not config_path:
        config_path = os.environ[CONFIG_VAR] if CONFIG_VAR in os.environ else None
    if not config_path:
        source = _read_default()
    else:
        if not (isfile(config_path) and access(config_path, R_OK)):
            raise ConfigError("Configuration is not readable: %s" % config_path)
        with open(config_path, "r", encoding="utf8") as fp:
            source = fp.read()
    try:
        return CONVERTER.from_yaml(_replace_envvars(source), MlDegreeConfig)
    except KeyError as e:
        raise ConfigError("Configuration refers to an unset environment variable: %s" % e) from e
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError("Configuration is not valid: %s" % (config_path or DEFAULT_CONFIG)) from e


def reset() -> None:
    """Reset the config singleton, forcing it to be reloaded when next used."""
    global _CONFIG  # pylint: disable=global-statement
    _CONFIG = None


def config(config_path: Optional[str] = None) -> MlDegreeConfig:
    """Retrieve configuration, loading it once and caching it."""
    global _CONFIG  # pylint: disable=global-statement
    if _CONFIG is None:
        _CONFIG = _load_config(config_path)
    return _CONFIG
