# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
import os
from unittest.mock import patch

import pytest

from mldegree.config import ConfigError, MlDegreeConfig, SolverConfig, ToleranceConfig, config, reset


def fixture(filename: str) -> str:
    return os.path.join(os.path.dirname(__file__), "fixtures", "config", filename)


APPLICATION_YAML = fixture("application.yaml")
INVALID_YAML = fixture("invalid.yaml")
NEGATIVE_YAML = fixture("negative.yaml")


class TestConfig:
    @pytest.fixture(autouse=True)
    def cleanup(self):
        """Reset singleton before and after tests."""
        reset()
        yield
        reset()

    @patch.dict(os.environ, {"MLDEGREE_CONFIG_PATH": APPLICATION_YAML, "MLDEGREE_SEED": "42"}, clear=True)
    def test_config_env(self):
        result = config()
        TestConfig._validate_config(result)

    @patch.dict(os.environ, {"MLDEGREE_SEED": "42"}, clear=True)
    def test_config_path(self):
        result = config(config_path=APPLICATION_YAML)
        TestConfig._validate_config(result)

    @patch.dict(os.environ, {}, clear=True)
    def test_config_default(self):
        assert config() == MlDegreeConfig()

    @patch.dict(os.environ, {}, clear=True)
    def test_config_cached(self):
        assert config() is config()

    @patch.dict(os.environ, {"MLDEGREE_CONFIG_PATH": APPLICATION_YAML}, clear=True)
    def test_config_env_missing_var(self):
        with pytest.raises(ConfigError, match=r"unset environment variable: 'MLDEGREE_SEED'"):
            config()

    @patch.dict(os.environ, {"MLDEGREE_CONFIG_PATH": "bogus"}, clear=True)
    def test_config_env_not_found(self):
        with pytest.raises(ConfigError, match=r"Configuration is not readable: bogus"):
            config()

    @patch.dict(os.environ, {}, clear=True)
    def test_config_extra_key(self):
        with pytest.raises(ConfigError, match=r"Configuration is not valid"):
            config(config_path=INVALID_YAML)

    @patch.dict(os.environ, {}, clear=True)
    def test_config_negative_tolerance(self):
        with pytest.raises(ConfigError, match=r"not valid|must be positive"):
            config(config_path=NEGATIVE_YAML)

    def test_tolerance_validation(self):
        with pytest.raises(ConfigError, match=r"cluster must be positive"):
            ToleranceConfig(cluster=0)

    def test_defaults(self):
        tolerances = ToleranceConfig()
        assert tolerances.convergence == 1.0e-13
        assert tolerances.residual == 1.0e-9
        assert tolerances.cluster == 1.0e-7
        assert tolerances.max_iterations == 200
        assert SolverConfig().seed == 0

    @staticmethod
    def _validate_config(result):
        assert result == MlDegreeConfig(
            solver=SolverConfig(
                seed=42,
                generic_samples=5,
                tolerances=ToleranceConfig(
                    convergence=1.0e-12,
                    residual=1.0e-8,
                    cluster=1.0e-6,
                    discard=1.0e-9,
                    singular=1.0e-10,
                    max_iterations=100,
                ),
            )
        )
