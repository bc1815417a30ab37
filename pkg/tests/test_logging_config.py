"""Tests for logging setup."""

import logging

import pytest

from stefan_kit.logging_config import get_logger, setup_logging


@pytest.fixture
def restore_loggers():
    yield
    for name in ("stefan_kit", "stefan_runs"):
        logger = logging.getLogger(name)
        for handler in list(logger.handlers):
            handler.close()
            logger.removeHandler(handler)


class TestSetupLogging:
    """Test setup_logging."""

    def test_creates_log_files(self, tmp_path, restore_loggers):
        log_dir = tmp_path / "logs"
        setup_logging(log_dir=log_dir, app_log_level="DEBUG")
        get_logger("neumann").info("solved")
        assert (log_dir / "app.log").exists()
        assert (log_dir / "runs.jsonl").exists()
        assert "solved" in (log_dir / "app.log").read_text()

    def test_repeated_setup_does_not_stack(self, tmp_path, restore_loggers):
        setup_logging(log_dir=tmp_path)
        setup_logging(log_dir=tmp_path)
        assert len(logging.getLogger("stefan_kit").handlers) == 2
        assert len(logging.getLogger("stefan_runs").handlers) == 1

    def test_run_logging_disabled(self, tmp_path, restore_loggers):
        log_dir = tmp_path / "quiet"
        setup_logging(log_dir=log_dir, enable_run_logging=False)
        assert not (log_dir / "runs.jsonl").exists()

    def test_level(self, tmp_path, restore_loggers):
        setup_logging(log_dir=tmp_path, app_log_level="warning")
        assert logging.getLogger("stefan_kit").level == logging.WARNING

    def test_get_logger_name(self):
        assert get_logger("cli").name == "stefan_kit.cli"
