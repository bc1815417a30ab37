"""
Specialized logger for the run audit trail.

Every CLI run (solve, equivalence check, sweep, verification) is recorded as one
JSON object per line. The trail is kept apart from the result files so those stay
byte-identical between runs.
"""

import json
import logging
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional


def new_run_id() -> str:
    """Return a short identifier correlating the events of one run."""
    return f"run_{uuid.uuid4().hex[:8]}"


def _timestamp() -> str:
    return datetime.now(timezone.utc).replace(tzinfo=None).isoformat() + "Z"


class RunLogger:
    """
    Logger for solver and verification runs with structured JSON output.

    Logs are written in JSON Lines format for easy parsing and analysis.
    """

    def __init__(self, enabled: bool = True):
        """
        Initialize run logger.

        Args:
            enabled: Whether logging is enabled
        """
        self.enabled = enabled
        self.logger = logging.getLogger("stefan_runs")

    def log_solve(
        self,
        spec_kind: str,
        regime: str,
        front_coeff: Optional[float],
        residual: Optional[float],
        elapsed_ms: float,
        run_id: Optional[str] = None,
    ) -> None:
        """
        Log a similarity solve.

        Args:
            spec_kind: Boundary condition kind (dirichlet, convective, flux)
            regime: Regime tag of the solution
            front_coeff: Front coefficient, None in pure conduction
            residual: Fixed-point residual at the returned root
            elapsed_ms: Wall time in milliseconds
            run_id: Optional run ID for correlation
        """
        if not self.enabled:
            return

        self._write_json(
            {
                "timestamp": _timestamp(),
                "event": "solve",
                "run_id": run_id,
                "spec_kind": spec_kind,
                "regime": regime,
                "front_coeff": front_coeff,
                "residual": residual,
                "elapsed_ms": round(elapsed_ms, 3),
            }
        )

    def log_equivalence(
        self,
        direction: str,
        gap: float,
        passed: bool,
        elapsed_ms: float,
        run_id: Optional[str] = None,
    ) -> None:
        """
        Log an equivalence round trip.

        Args:
            direction: "dirichlet_to_convective" or "convective_to_dirichlet"
            gap: Absolute gap between the two front coefficients
            passed: Whether the gap met the tolerance
            elapsed_ms: Wall time in milliseconds
            run_id: Optional run ID for correlation
        """
        if not self.enabled:
            return

        self._write_json(
            {
                "timestamp": _timestamp(),
                "event": "equivalence",
                "run_id": run_id,
                "direction": direction,
                "gap": gap,
                "passed": passed,
                "elapsed_ms": round(elapsed_ms, 3),
            }
        )

    def log_sweep(
        self,
        points: int,
        flagged: int,
        elapsed_ms: float,
        run_id: Optional[str] = None,
    ) -> None:
        """
        Log a coefficient sweep.

        Args:
            points: Number of grid entries
            flagged: Entries at or below the regime threshold
            elapsed_ms: Wall time in milliseconds
            run_id: Optional run ID for correlation
        """
        if not self.enabled:
            return

        self._write_json(
            {
                "timestamp": _timestamp(),
                "event": "sweep",
                "run_id": run_id,
                "points": points,
                "flagged": flagged,
                "elapsed_ms": round(elapsed_ms, 3),
            }
        )

    def log_verification(
        self,
        metrics: Dict[str, Any],
        passed: bool,
        failures: List[str],
        elapsed_ms: float,
        run_id: Optional[str] = None,
    ) -> None:
        """
        Log a verification run.

        Args:
            metrics: Measured residuals, orders and errors
            passed: Whether every check met its tolerance
            failures: Names of the failing metrics
            elapsed_ms: Wall time in milliseconds
            run_id: Optional run ID for correlation
        """
        if not self.enabled:
            return

        self._write_json(
            {
                "timestamp": _timestamp(),
                "event": "verification",
                "run_id": run_id,
                "metrics": metrics,
                "passed": passed,
                "failures": failures,
                "elapsed_ms": round(elapsed_ms, 3),
            }
        )

    def _write_json(self, data: Dict[str, Any]) -> None:
        """
        Write a JSON object as a single line to the log file.

        Args:
            data: Dictionary to write as JSON
        """
        try:
            json_line = json.dumps(data, ensure_ascii=False, allow_nan=False)
            self.logger.debug(json_line)
        except Exception as e:
            app_logger = logging.getLogger("stefan_kit")
            app_logger.error(f"Failed to write run log: {e}")
