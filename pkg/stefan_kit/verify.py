"""Numerical verification of the similarity solutions.

Finite-difference residuals check that the analytic fields satisfy the heat
equations, the Stefan condition at the front and the face condition; the
enthalpy march and the dimensionless round trip are run alongside and
collected into one report.
"""

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .config import Settings
from .dimensionless import dimensionless_roundtrip
from .enthalpy import EnthalpyResult, enthalpy_march
from .errors import GridError, InputError
from .model import Convective, Dirichlet
from .neumann import SimilaritySolution, front_position, front_velocity
from .solve import (
    face_temperature,
    liquid_field,
    liquid_gradient,
    require_two_phase,
    solid_field,
    solid_gradient,
    temperature_scale,
)

logger = logging.getLogger("stefan_kit.verify")

Field = Callable[[float, float], float]

DEFAULT_TIMES = (100.0, 1000.0, 3600.0)
DEFAULT_LENGTHS = (0.1, 1.0)
ROBIN_STEP = 1e-2


def heat_residual(
    profile: Field, x: float, t: float, h: float, dt: float, diffusivity: float
) -> float:
    """Central-difference value of T_t - alpha T_xx at (x, t)."""
    if not (h > 0.0 and dt > 0.0):
        raise GridError(f"steps must be positive, got h = {h!r}, dt = {dt!r}")
    if not t - dt > 0.0:
        raise GridError(f"time stencil reaches t <= 0 at t = {t!r}, dt = {dt!r}")
    T_t = (profile(x, t + dt) - profile(x, t - dt)) / (2.0 * dt)
    T_xx = (profile(x + h, t) - 2.0 * profile(x, t) + profile(x - h, t)) / (h * h)
    return T_t - diffusivity * T_xx


def observed_order(coarse: float, fine: float, refine: float = 2.0) -> float:
    """log(coarse / fine) / log(refine); inf when the fine residual vanishes."""
    if fine == 0.0:
        return math.inf if coarse > 0.0 else math.nan
    return math.log(coarse / fine) / math.log(refine)


@dataclass(frozen=True)
class HeatResidual:
    """Largest normalized heat-equation residuals |T_t - alpha T_xx| t / dT."""

    solid: float
    liquid: float
    h: float
    samples: int
    skipped: int


def _time_step(sol: SimilaritySolution, h: float) -> float:
    m = sol.spec.material
    return 0.5 * h * h / max(m.alpha_s, m.alpha_l)


def _heat_samples(
    sol: SimilaritySolution, h: float, times: Sequence[float], n_samples: int
) -> Tuple[List[Tuple[str, float, float]], int]:
    """Sample points whose stencils (step h) stay within one phase."""
    if n_samples < 1:
        raise GridError("at least one sample per phase is needed")
    dt = _time_step(sol, h)
    m = sol.spec.material
    points: List[Tuple[str, float, float]] = []
    skipped = 0
    for t in times:
        if not t - dt > 0.0:
            raise GridError(f"time stencil reaches t <= 0 at t = {t!r}")
        s = front_position(sol, t)
        s_early = front_position(sol, t - dt)
        s_late = front_position(sol, t + dt)
        reach = 6.0 * math.sqrt(m.alpha_l * t)
        for j in range(1, n_samples + 1):
            x_solid = s * j / (n_samples + 1)
            if x_solid + h < s_early:
                points.append(("solid", x_solid, t))
            else:
                skipped += 1
            x_liquid = s + reach * j / n_samples
            if x_liquid - h > s_late:
                points.append(("liquid", x_liquid, t))
            else:
                skipped += 1
    return points, skipped


def _max_heat(sol: SimilaritySolution, points, h: float) -> Tuple[float, float]:
    m = sol.spec.material
    dt = _time_step(sol, h)
    scale = temperature_scale(sol)
    worst = {"solid": 0.0, "liquid": 0.0}

    def solid(x: float, t: float) -> float:
        return solid_field(sol, x, t)

    def liquid(x: float, t: float) -> float:
        return liquid_field(sol, x, t)

    for phase, x, t in points:
        if phase == "solid":
            value = heat_residual(solid, x, t, h, dt, m.alpha_s)
        else:
            value = heat_residual(liquid, x, t, h, dt, m.alpha_l)
        worst[phase] = max(worst[phase], abs(value) * t / scale)
    return worst["solid"], worst["liquid"]


def pde_residual(
    sol: SimilaritySolution,
    h: float,
    times: Sequence[float] = DEFAULT_TIMES,
    n_samples: int = 20,
) -> Tuple[HeatResidual, HeatResidual]:
    """Heat-equation residuals of both phases at steps h and h / 2.

    The sample set is fixed by the coarse stencils; stencils that would
    straddle the front are skipped and counted.

    Raises:
        GridError: If h is not positive or the time stencil reaches t <= 0
    """
    require_two_phase(sol)
    if not h > 0.0:
        raise GridError(f"x-step must be positive, got {h!r}")
    points, skipped = _heat_samples(sol, h, times, n_samples)
    if not points:
        raise GridError("every stencil straddles the front; reduce the x-step")
    results = []
    for step in (h, h / 2.0):
        solid, liquid = _max_heat(sol, points, step)
        results.append(HeatResidual(solid, liquid, step, len(points), skipped))
    return results[0], results[1]


def stefan_residual(sol: SimilaritySolution, t: float, h: float) -> float:
    """One-sided estimate of k_s T_s,x - k_l T_l,x - rho l ds/dt at the front.

    The residual is relative to rho l ds/dt.

    Raises:
        GridError: If s(t) < 10 h
    """
    require_two_phase(sol)
    m = sol.spec.material
    s = front_position(sol, t)
    if not (h > 0.0 and s >= 10.0 * h):
        raise GridError(f"front s(t) = {s:.3e} m is too close to the face for h = {h!r}")
    grad_solid = (solid_field(sol, s, t) - solid_field(sol, s - h, t)) / h
    grad_liquid = (liquid_field(sol, s + h, t) - liquid_field(sol, s, t)) / h
    latent = m.rho * m.latent_heat * front_velocity(sol, t)
    return abs(m.k_s * grad_solid - m.k_l * grad_liquid - latent) / latent


def interface_balance(sol: SimilaritySolution, t: float) -> float:
    """Stefan condition with exact gradients, relative to rho l ds/dt."""
    require_two_phase(sol)
    m = sol.spec.material
    s = front_position(sol, t)
    latent = m.rho * m.latent_heat * front_velocity(sol, t)
    jump = m.k_s * solid_gradient(sol, s, t) - m.k_l * liquid_gradient(sol, s, t)
    return abs(jump - latent) / latent


@dataclass(frozen=True)
class RobinResidual:
    """Face condition residual; ``value`` uses the Richardson-extrapolated gradient."""

    value: float
    coarse: float
    fine: float
    order: float
    h: float
    refine: float


def robin_residual(
    sol: SimilaritySolution, t: float, h: float, refine: float = 10.0
) -> RobinResidual:
    """Relative residual of the convective or flux face condition at x = 0.

    Central differences at steps h and h / refine reach past the face through
    the analytic continuation of the face-side branch.
    """
    bc = sol.spec.bc
    if isinstance(bc, Dirichlet):
        raise InputError("a Dirichlet face has no flux condition to check")
    if not (h > 0.0 and refine > 1.0):
        raise GridError(f"need h > 0 and refine > 1, got h = {h!r}, refine = {refine!r}")
    m = sol.spec.material
    if sol.is_two_phase:
        branch, k = solid_field, m.k_s
    else:
        branch, k = liquid_field, m.k_l

    def gradient(step: float) -> float:
        return (branch(sol, step, t) - branch(sol, -step, t)) / (2.0 * step)

    T_face = face_temperature(sol)
    if isinstance(bc, Convective):
        target = bc.h_0 / math.sqrt(t) * (T_face - bc.T_inf)
    else:
        target = bc.q_0 / math.sqrt(t)

    d_coarse = gradient(h)
    d_fine = gradient(h / refine)
    d_rich = (refine**2 * d_fine - d_coarse) / (refine**2 - 1.0)
    coarse = abs(k * d_coarse - target) / abs(target)
    fine = abs(k * d_fine - target) / abs(target)
    return RobinResidual(
        value=abs(k * d_rich - target) / abs(target),
        coarse=coarse,
        fine=fine,
        order=observed_order(coarse, fine, refine),
        h=h,
        refine=refine,
    )


@dataclass(frozen=True)
class ResidualReport:
    """Residuals of the analytic fields and their observed orders."""

    heat_residual_solid: float
    heat_residual_liquid: float
    heat_order_solid: float
    heat_order_liquid: float
    stefan_residual: float
    stefan_order: float
    interface_balance: float
    robin_residual: Optional[float]
    robin_order: Optional[float]
    skipped: int
    grids: Dict[str, Any]


def residual_report(
    sol: SimilaritySolution,
    times: Sequence[float] = DEFAULT_TIMES,
    n_samples: int = 20,
) -> ResidualReport:
    """Heat, Stefan, interface and face residuals with steps scaled to the front."""
    require_two_phase(sol)
    times = sorted(times)
    s_min = front_position(sol, times[0])
    pde_h = s_min / 40.0
    coarse, fine = pde_residual(sol, pde_h, times, n_samples)

    stefan_h = s_min / 100.0
    stefan_coarse = max(stefan_residual(sol, t, stefan_h) for t in times)
    stefan_fine = max(stefan_residual(sol, t, stefan_h / 2.0) for t in times)
    balance = max(interface_balance(sol, t) for t in times)

    robin_value = robin_order = None
    robin_h = None
    if not isinstance(sol.spec.bc, Dirichlet):
        # step tied to the diffusion length of the face-side phase at each t
        m = sol.spec.material
        alpha = m.alpha_s if sol.is_two_phase else m.alpha_l
        robin_h = [ROBIN_STEP * math.sqrt(alpha * t) for t in times]
        robin = [robin_residual(sol, t, h) for t, h in zip(times, robin_h)]
        robin_value = max(r.value for r in robin)
        robin_order = min(r.order for r in robin)

    return ResidualReport(
        heat_residual_solid=coarse.solid,
        heat_residual_liquid=coarse.liquid,
        heat_order_solid=observed_order(coarse.solid, fine.solid),
        heat_order_liquid=observed_order(coarse.liquid, fine.liquid),
        stefan_residual=stefan_coarse,
        stefan_order=observed_order(stefan_coarse, stefan_fine),
        interface_balance=balance,
        robin_residual=robin_value,
        robin_order=robin_order,
        skipped=coarse.skipped,
        grids={
            "times": list(times),
            "pde_h": [pde_h, pde_h / 2.0],
            "stefan_h": [stefan_h, stefan_h / 2.0],
            "robin_h": robin_h,
            "samples": coarse.samples,
        },
    )


@dataclass(frozen=True)
class VerificationThresholds:
    heat_order_min: float = 1.85
    stefan_order_min: float = 0.9
    robin_tol: float = 1e-8
    front_tol: float = 0.02
    dimensionless_tol: float = 1e-10

    @classmethod
    def from_settings(cls, settings: Settings) -> "VerificationThresholds":
        return cls(
            heat_order_min=settings.heat_order_min,
            stefan_order_min=settings.stefan_order_min,
            robin_tol=settings.robin_tol,
            front_tol=settings.front_tol,
            dimensionless_tol=settings.dimensionless_tol,
        )


@dataclass
class VerificationReport:
    """Everything a verification run measured and which checks failed."""

    residuals: ResidualReport
    enthalpy: EnthalpyResult
    dimensionless: List[Dict[str, Any]]
    failures: List[str] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def metrics(self) -> Dict[str, Any]:
        """Flat metric dictionary, as recorded in the run log."""
        metrics: Dict[str, Any] = {
            k: v for k, v in asdict(self.residuals).items() if k not in ("grids", "skipped")
        }
        metrics["enthalpy_front_error"] = self.enthalpy.max_rel_error
        for entry in self.dimensionless:
            metrics[f"dimensionless_gap_L{entry['L']:g}"] = entry["field_gap"]
        return metrics

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "failures": list(self.failures),
            "residuals": asdict(self.residuals),
            "enthalpy": {**self.enthalpy.summary(), "front_path": self.enthalpy.error_table()},
            "dimensionless": self.dimensionless,
        }


def run_verification(
    sol: SimilaritySolution,
    thresholds: VerificationThresholds = VerificationThresholds(),
    times: Sequence[float] = DEFAULT_TIMES,
    t0: float = 100.0,
    t1: float = 400.0,
    cells: int = 2000,
    lengths: Sequence[float] = DEFAULT_LENGTHS,
) -> VerificationReport:
    """Run every check on a solidifying solution and collect the failures.

    Raises:
        RegimeError: If ``sol`` is in the pure-conduction regime
    """
    require_two_phase(sol)
    started = time.perf_counter()
    residuals = residual_report(sol, times)
    march = enthalpy_march(sol, t0=t0, t1=t1, cells=cells)

    dimensionless: List[Dict[str, Any]] = []
    if isinstance(sol.spec.bc, (Dirichlet, Convective)):
        for L in lengths:
            trip = dimensionless_roundtrip(sol.spec, L, times=times)
            dimensionless.append(asdict(trip))

    failures: List[str] = []
    if not residuals.heat_order_solid >= thresholds.heat_order_min:
        failures.append("heat_order_solid")
    if not residuals.heat_order_liquid >= thresholds.heat_order_min:
        failures.append("heat_order_liquid")
    if not residuals.stefan_order >= thresholds.stefan_order_min:
        failures.append("stefan_order")
    robin = residuals.robin_residual
    if robin is not None and not robin <= thresholds.robin_tol:
        failures.append("robin_residual")
    if not march.max_rel_error <= thresholds.front_tol:
        failures.append("enthalpy_front_error")
    for entry in dimensionless:
        if not (
            entry["field_gap"] <= thresholds.dimensionless_tol
            and entry["front_gap"] <= thresholds.dimensionless_tol
        ):
            failures.append(f"dimensionless_gap_L{entry['L']:g}")

    report = VerificationReport(
        residuals=residuals,
        enthalpy=march,
        dimensionless=dimensionless,
        failures=failures,
        elapsed_s=time.perf_counter() - started,
    )
    if report.passed:
        logger.info(f"Verification passed in {report.elapsed_s:.2f} s")
    else:
        logger.warning(f"Verification failed: {', '.join(failures)}")
    return report
