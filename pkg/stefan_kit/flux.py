"""Imposed-flux problem: face condition k_s T_x(0,t) = q_0 / sqrt(t).

The front coefficient sigma solves H(x) = x with
H(x) = b_q exp(-b x^2) - b3 F1(x), b_q = q_0 / (rho l sqrt(alpha_l)).
Extracting less than the critical flux leaves the material liquid.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainError, InputError, RegimeError
from .model import (
    DimensionlessGroups,
    Dirichlet,
    Flux,
    ProblemSpec,
    b3_group,
    bq_group,
    groups_flux,
    snap_threshold,
)
from .neumann import (
    DEFAULT_CAP,
    DEFAULT_TOL,
    DEFAULT_XTOL,
    Phase,
    Regime,
    SimilaritySolution,
    check_point,
    classify_point,
    liquid_temperature,
    solve_p1,
)
from .roots import RootResult, solve_fixed_point
from .special import F1, erf, erfc

logger = logging.getLogger("stefan_kit.flux")


def critical_q0(spec: ProblemSpec) -> float:
    """Threshold k_l (T_i - T_f) / sqrt(pi alpha_l); zero when T_i = T_f.

    Snapped to the largest q_0 with b_q <= b3.
    """
    if not isinstance(spec.bc, Flux):
        raise InputError(f"critical_q0 needs a flux spec, got {spec.kind}")
    m = spec.material
    estimate = m.k_l * (spec.T_i - m.T_f) / math.sqrt(math.pi * m.alpha_l)
    if not estimate > 0.0:
        return estimate
    b3 = b3_group(spec)
    return snap_threshold(estimate, lambda q0: bq_group(m, q0) > b3)


def classify_flux_regime(spec: ProblemSpec) -> Regime:
    """Two-phase iff b_q > b3, i.e. q_0 > critical_q0."""
    if not isinstance(spec.bc, Flux):
        raise InputError(f"classify_flux_regime needs a flux spec, got {spec.kind}")
    groups = groups_flux(spec)
    if groups.b_q > groups.b3:
        return Regime.TWO_PHASE
    return Regime.PURE_CONDUCTION


def H(x: float, groups: DimensionlessGroups) -> float:
    """b_q exp(-b x^2) - b3 F1(x) for x >= 0; H(0) = b_q - b3."""
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"H is defined for x >= 0, got {x!r}")
    return groups.b_q * math.exp(-groups.b * x * x) - groups.b3 * F1(x)


def solve_flux_coefficient(
    groups: DimensionlessGroups,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> RootResult:
    """Unique sigma > 0 with H(sigma) = sigma.

    Raises:
        RegimeError: If b_q <= b3 (no solid forms)
    """
    if not groups.b_q > groups.b3:
        raise RegimeError(
            "b_q <= b3: the extracted flux is too small to solidify, "
            "use pure_conduction_temperature_flux"
        )
    result = solve_fixed_point(
        lambda x: H(x, groups), lower=0.0, upper=1.0, cap=cap, tol=tol, xtol=xtol
    )
    logger.debug(f"sigma = {result.root!r} after {result.iterations} iterations")
    return result


def solve_flux(
    spec: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> SimilaritySolution:
    """Similarity solution of the imposed-flux problem in either regime."""
    groups = groups_flux(spec)
    regime = classify_flux_regime(spec)
    if regime is Regime.PURE_CONDUCTION:
        logger.info(f"q_0 = {spec.bc.q_0:.6g} <= critical {critical_q0(spec):.6g}: pure conduction")
        return SimilaritySolution(spec=spec, groups=groups, regime=regime)
    root = solve_flux_coefficient(groups, tol=tol, xtol=xtol, cap=cap)
    logger.info(f"Flux solution: sigma = {root.root:.15g}, residual = {root.residual:.3e}")
    return SimilaritySolution(
        spec=spec,
        groups=groups,
        regime=regime,
        front_coeff=root.root,
        residual=root.residual,
        bracket=root.bracket,
    )


def _require_two_phase(sol: SimilaritySolution) -> Flux:
    if not isinstance(sol.spec.bc, Flux):
        raise InputError(f"expected a flux solution, got {sol.spec.kind}")
    if not sol.is_two_phase or sol.front_coeff is None:
        raise RegimeError("pure-conduction regime: use pure_conduction_temperature_flux")
    return sol.spec.bc


def _solid_amplitude(spec: ProblemSpec) -> float:
    """q_0 sqrt(pi alpha_s) / k_s."""
    m = spec.material
    return spec.bc.q_0 * math.sqrt(math.pi * m.alpha_s) / m.k_s


def solid_temperature_flux(sol: SimilaritySolution, x: float, t: float) -> float:
    """T_f - A (erf(sigma sqrt(b)) - erf(x / (2 sqrt(alpha_s t)))), any real x."""
    _require_two_phase(sol)
    m = sol.spec.material
    z = x / (2.0 * math.sqrt(m.alpha_s * t))
    erf_front = erf(sol.front_coeff * math.sqrt(sol.groups.b))
    return m.T_f - _solid_amplitude(sol.spec) * (erf_front - erf(z))


def solid_gradient_flux(sol: SimilaritySolution, x: float, t: float) -> float:
    _require_two_phase(sol)
    m = sol.spec.material
    root = math.sqrt(m.alpha_s * t)
    z = x / (2.0 * root)
    return _solid_amplitude(sol.spec) * math.exp(-z * z) / (math.sqrt(math.pi) * root)


def flux_face_temperature(sol: SimilaritySolution) -> float:
    """Face value T_f - A erf(sigma sqrt(b)), constant in t."""
    _require_two_phase(sol)
    erf_front = erf(sol.front_coeff * math.sqrt(sol.groups.b))
    return sol.spec.material.T_f - _solid_amplitude(sol.spec) * erf_front


def temperature_flux(sol: SimilaritySolution, x: float, t: float) -> Tuple[float, Phase]:
    """Temperature and phase of the two-phase imposed-flux solution."""
    _require_two_phase(sol)
    check_point(x, t)
    phase = classify_point(sol, x, t)
    if phase is Phase.INTERFACE:
        return sol.spec.material.T_f, phase
    if phase is Phase.SOLID:
        return solid_temperature_flux(sol, x, t), phase
    return liquid_temperature(sol.spec, sol.front_coeff, x, t), phase


def _require_pure_conduction(spec: ProblemSpec) -> Flux:
    if not isinstance(spec.bc, Flux):
        raise InputError(f"expected a flux spec, got {spec.kind}")
    if classify_flux_regime(spec) is Regime.TWO_PHASE:
        raise RegimeError("q_0 above the threshold: the problem solidifies, use temperature_flux")
    return spec.bc


def _liquid_amplitude(spec: ProblemSpec) -> float:
    """q_0 sqrt(pi alpha_l) / k_l."""
    m = spec.material
    return spec.bc.q_0 * math.sqrt(math.pi * m.alpha_l) / m.k_l


def pure_conduction_temperature_flux(
    spec: ProblemSpec, x: float, t: float, *, any_x: bool = False
) -> float:
    """Liquid-only field T_i - (q_0 sqrt(pi alpha_l) / k_l) erfc(x / (2 sqrt(alpha_l t)))."""
    _require_pure_conduction(spec)
    check_point(0.0 if any_x else x, t)
    eta = x / (2.0 * math.sqrt(spec.material.alpha_l * t))
    return spec.T_i - _liquid_amplitude(spec) * erfc(eta)


def pure_conduction_gradient_flux(spec: ProblemSpec, x: float, t: float) -> float:
    _require_pure_conduction(spec)
    root = math.sqrt(spec.material.alpha_l * t)
    eta = x / (2.0 * root)
    return _liquid_amplitude(spec) * math.exp(-eta * eta) / (math.sqrt(math.pi) * root)


def pure_conduction_face_temperature_flux(spec: ProblemSpec) -> float:
    _require_pure_conduction(spec)
    return spec.T_i - _liquid_amplitude(spec)


def q0_from_dirichlet(sol_p1: SimilaritySolution) -> float:
    """Flux coefficient sqrt(t) k_s T_x(0,t) of the Neumann solution.

    Equals k_s (T_f - T_0) / (sqrt(pi alpha_s) erf(xi sqrt(b))) for every t.
    """
    if not isinstance(sol_p1.spec.bc, Dirichlet) or sol_p1.front_coeff is None:
        raise InputError("q0_from_dirichlet needs a solved Dirichlet problem")
    m = sol_p1.spec.material
    erf_front = erf(sol_p1.front_coeff * math.sqrt(sol_p1.groups.b))
    return m.k_s * (m.T_f - sol_p1.spec.bc.T_0) / (math.sqrt(math.pi * m.alpha_s) * erf_front)


def t0_from_flux(sol_flux: SimilaritySolution) -> float:
    """Face temperature of the equivalent imposed-temperature problem."""
    return flux_face_temperature(sol_flux)


@dataclass(frozen=True)
class FluxRoundTrip:
    """Imposed temperature -> imposed flux -> solve, and back."""

    xi: float
    sigma: float
    q_0: float
    critical_q0: float
    mapped_T0: float
    gap: float


def flux_roundtrip(
    spec_p1: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> FluxRoundTrip:
    """Map a Dirichlet problem to its flux counterpart and compare coefficients.

    Raises:
        RegimeError: If the mapped flux does not exceed the threshold, which
            would contradict the bound on erf(xi sqrt(b))
    """
    sol_p1 = solve_p1(spec_p1, tol=tol, xtol=xtol, cap=cap)
    q_0 = q0_from_dirichlet(sol_p1)
    spec_flux = spec_p1.with_bc(Flux(q_0=q_0))
    sol_flux = solve_flux(spec_flux, tol=tol, xtol=xtol, cap=cap)
    if not sol_flux.is_two_phase:
        raise RegimeError(f"mapped q_0 = {q_0!r} is not above the critical flux")
    gap = abs(sol_flux.front_coeff - sol_p1.front_coeff)
    logger.info(f"Flux round trip: xi = {sol_p1.front_coeff:.15g}, gap = {gap:.3e}")
    return FluxRoundTrip(
        xi=sol_p1.front_coeff,
        sigma=sol_flux.front_coeff,
        q_0=q_0,
        critical_q0=critical_q0(spec_flux),
        mapped_T0=t0_from_flux(sol_flux),
        gap=gap,
    )
