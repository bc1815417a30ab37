"""Tests for the run audit trail."""

import json
import logging

import pytest

from stefan_kit.logging_config import setup_run_logger
from stefan_kit.run_logger import RunLogger, new_run_id


@pytest.fixture
def trail(tmp_path):
    setup_run_logger(tmp_path)
    yield tmp_path / "runs.jsonl"
    for handler in list(logging.getLogger("stefan_runs").handlers):
        handler.close()
        logging.getLogger("stefan_runs").removeHandler(handler)


def read_events(path):
    return [json.loads(line) for line in path.read_text().splitlines() if line]


class TestRunLogger:
    """Test RunLogger output."""

    def test_solve_event(self, trail):
        RunLogger().log_solve("dirichlet", "two_phase", 0.59, 1e-14, 1.23456, run_id="run_1")
        (event,) = read_events(trail)
        assert event["event"] == "solve"
        assert event["run_id"] == "run_1"
        assert event["front_coeff"] == 0.59
        assert event["elapsed_ms"] == 1.235
        assert event["timestamp"].endswith("Z")

    def test_other_events(self, trail):
        runs = RunLogger()
        runs.log_equivalence("dirichlet_to_convective", 1e-15, True, 2.0)
        runs.log_sweep(50, 2, 10.0)
        runs.log_verification({"stefan_order": 1.0}, False, ["enthalpy_front_error"], 5.0)
        events = read_events(trail)
        assert [e["event"] for e in events] == ["equivalence", "sweep", "verification"]
        assert events[1]["flagged"] == 2
        assert events[2]["failures"] == ["enthalpy_front_error"]

    def test_disabled(self, trail):
        RunLogger(enabled=False).log_sweep(3, 0, 1.0)
        assert read_events(trail) == []

    def test_non_finite_metrics_not_written(self, trail, caplog, monkeypatch):
        monkeypatch.setattr(logging.getLogger("stefan_kit"), "propagate", True)
        with caplog.at_level(logging.ERROR, logger="stefan_kit"):
            RunLogger().log_verification({"heat_order_liquid": float("nan")}, False, [], 1.0)
        assert read_events(trail) == []
        assert "Failed to write run log" in caplog.text

    def test_run_id_format(self):
        run_id = new_run_id()
        assert run_id.startswith("run_")
        assert len(run_id) == 12
        assert new_run_id() != run_id
