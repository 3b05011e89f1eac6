"""
Settings tests.
"""

import json
import logging
import tempfile
from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from walkerverify.config import (
    DEFAULT_SEED,
    IntegratorConfig,
    LoggingConfig,
    SamplingConfig,
    ToleranceConfig,
    WalkerVerifyConfig,
)
from walkerverify.utils.logging import ROOT_LOGGER, format_point, get_logger, setup_logging


class TestSamplingConfig:
    """Sampling settings."""

    def test_default_config(self):
        """Defaults carry the fixed base seed."""
        config = SamplingConfig()

        assert config.seed == DEFAULT_SEED == 0x57414C4B
        assert config.samples >= 1
        assert config.retry_cap == 50

    def test_invalid_samples(self):
        """Zero samples are rejected."""
        with pytest.raises(ValidationError):
            SamplingConfig(samples=0)


class TestToleranceConfig:
    """Tolerance settings."""

    def test_default_config(self):
        config = ToleranceConfig()

        assert config.einstein == 1e-7
        assert config.killing == 1e-9
        assert config.identity == 1e-8
        assert config.det_t == 1e-8
        assert config.division_guard == 1e-12

    def test_non_positive_tolerance(self):
        with pytest.raises(ValidationError):
            ToleranceConfig(einstein=0.0)


class TestIntegratorConfig:
    """Flow integrator settings."""

    def test_default_config(self):
        config = IntegratorConfig()

        assert config.method == "DOP853"
        assert config.rtol == 1e-10
        assert config.max_step is None

    def test_invalid_method(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(method="Euler")


class TestLoggingConfig:
    """Logging settings."""

    def test_default_config(self):
        config = LoggingConfig()

        assert config.level == "WARNING"
        assert config.file_path is None
        assert config.max_file_size == 10 * 1024 * 1024
        assert config.backup_count == 5

    def test_invalid_logging_level(self):
        with pytest.raises(ValueError):
            LoggingConfig(level="INVALID")


class TestLoggingSetup:
    """Handlers installed by setup_logging."""

    def test_verbose_lowers_level(self):
        logger = setup_logging(LoggingConfig(level="WARNING"), verbose=True)

        assert logger.level == logging.INFO
        assert len(logger.handlers) == 1

    def test_repeated_setup_replaces_handlers(self, tmp_path):
        config = LoggingConfig(file_path=tmp_path / "logs" / "run.log")
        setup_logging(config)
        logger = setup_logging(config)

        assert len(logger.handlers) == 2
        assert (tmp_path / "logs").is_dir()
        setup_logging()

    def test_child_loggers(self):
        assert get_logger().name == ROOT_LOGGER
        assert get_logger("gauge").name == f"{ROOT_LOGGER}.gauge"
        assert get_logger("walkerverify.classify").name == "walkerverify.classify"

    def test_format_point(self):
        assert format_point({"v": 0.25, "x": 1.0}) == "v=0.25 x=1"


class TestWalkerVerifyConfig:
    """Top-level settings."""

    def test_default_config(self):
        config = WalkerVerifyConfig()

        assert config.threads == 1
        assert isinstance(config.sampling, SamplingConfig)
        assert isinstance(config.tolerance, ToleranceConfig)
        assert isinstance(config.integrator, IntegratorConfig)

    def test_threads_from_environment(self, monkeypatch):
        """WALKER_VERIFY_THREADS caps the worker threads."""
        monkeypatch.setenv("WALKER_VERIFY_THREADS", "4")

        assert WalkerVerifyConfig().threads == 4

    def test_empty_threads_variable(self, monkeypatch):
        monkeypatch.setenv("WALKER_VERIFY_THREADS", "")

        assert WalkerVerifyConfig().threads == 1

    def test_nested_environment(self, monkeypatch):
        monkeypatch.setenv("WALKER_VERIFY_TOLERANCE__EINSTEIN", "1e-6")

        assert WalkerVerifyConfig().tolerance.einstein == 1e-6

    def test_from_file_json(self):
        config_data = {"threads": 2, "sampling": {"samples": 17, "seed": 3}}

        with tempfile.NamedTemporaryFile(mode="w", suffix=".json", delete=False) as f:
            json.dump(config_data, f)
            config_file = Path(f.name)

        try:
            config = WalkerVerifyConfig.from_file(config_file)

            assert config.threads == 2
            assert config.sampling.samples == 17
            assert config.sampling.seed == 3
        finally:
            config_file.unlink()

    def test_from_file_yaml(self, tmp_path):
        config_file = tmp_path / "settings.yaml"
        config_file.write_text(yaml.safe_dump({"tolerance": {"killing": 1e-8}}), encoding="utf-8")

        config = WalkerVerifyConfig.from_file(config_file)

        assert config.tolerance.killing == 1e-8

    def test_unsupported_file(self, tmp_path):
        config_file = tmp_path / "settings.toml"
        config_file.write_text("threads = 2", encoding="utf-8")

        with pytest.raises(ValueError):
            WalkerVerifyConfig.from_file(config_file)

    def test_to_dict(self):
        config_dict = WalkerVerifyConfig().to_dict()

        assert isinstance(config_dict, dict)
        assert set(config_dict) >= {"sampling", "tolerance", "integrator", "logging", "threads"}
