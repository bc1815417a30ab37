"""Deterministic JSON and CSV output of the command-line tool.

Floats are written with repr, which round-trips every binary64 value; JSON
keys are sorted, non-finite numbers become null and line endings are "\\n",
so identical inputs give byte-identical files.
"""

import csv
import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .equivalence import xi_bounds
from .flux import critical_q0
from .model import Convective, Dirichlet, Flux, critical_h0, spec_to_flat
from .neumann import SimilaritySolution, front_position
from .solve import face_temperature, solid_gradient, temperature

COEFF_NAMES = {"dirichlet": "xi", "convective": "lambda", "flux": "sigma"}


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; NaN and infinities map to None."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


def dumps(data: Any) -> str:
    return json.dumps(to_jsonable(data), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: Path, data: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps(data))


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def profile_extent(sol: SimilaritySolution, t: float) -> float:
    """Right end of a profile: the front plus six liquid diffusion lengths."""
    s = front_position(sol, t) if sol.is_two_phase else 0.0
    return s + 6.0 * math.sqrt(sol.spec.material.alpha_l * t)


def profile_rows(
    sol: SimilaritySolution, times: Sequence[float], x_samples: int
) -> List[List[Any]]:
    """Rows (t, x, temperature, phase) on x_samples evenly spaced points per time."""
    rows: List[List[Any]] = []
    for t in times:
        for x in np.linspace(0.0, profile_extent(sol, t), x_samples):
            T, phase = temperature(sol, float(x), t)
            rows.append([float(t), float(x), T, phase.value])
    return rows


def solution_summary(
    sol: SimilaritySolution, times: Sequence[float], T_inf: Optional[float] = None
) -> Dict[str, Any]:
    """Summary document of a solve.

    Front fields (coefficient, residual, bracket, positions, flux coefficient
    and bounds) are present only when the material solidifies.
    """
    spec = sol.spec
    data: Dict[str, Any] = {
        "kind": spec.kind,
        "regime": sol.regime.value,
        "spec": spec_to_flat(spec),
        "groups": sol.groups.as_dict(),
        "face_temperature": face_temperature(sol),
    }
    if isinstance(spec.bc, Convective):
        data["critical_h0"] = critical_h0(spec)
    elif isinstance(spec.bc, Flux):
        data["critical_q0"] = critical_q0(spec)
    if not sol.is_two_phase:
        return data

    coeff = sol.front_coeff
    data["front_coeff"] = coeff
    data[COEFF_NAMES[spec.kind]] = coeff
    data["residual"] = sol.residual
    data["bracket"] = list(sol.bracket) if sol.bracket is not None else None
    data["front"] = [{"t": float(t), "s": front_position(sol, t)} for t in times]
    data["q_0"] = spec.material.k_s * solid_gradient(sol, 0.0, 1.0)

    # bounds on erf(coeff sqrt(b)) of the Dirichlet problem sharing this front
    T_face = face_temperature(sol)
    spec_p1 = spec if isinstance(spec.bc, Dirichlet) else spec.with_bc(Dirichlet(T_0=T_face))
    if isinstance(spec.bc, Convective) and T_inf is None:
        T_inf = spec.bc.T_inf
    bounds_T_inf = T_inf if T_inf is not None and T_inf < T_face else None
    bounds = xi_bounds(spec_p1, bounds_T_inf, xi=coeff)
    data["bounds"] = {
        "erf_front": bounds.erf_front,
        "bound_44": bounds.bound_44,
        "bound_46": bounds.bound_46,
        "physical_44": bounds.physical_44,
        "T_inf": bounds_T_inf,
    }
    return data
