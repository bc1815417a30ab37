"""Convective problem: face condition k_s T_x(0,t) = (h_0 / sqrt(t)) (T(0,t) - T_inf).

Above the threshold h_0 > critical_h0 the material solidifies and the front
coefficient lambda is the unique root of F(x) = x. At or below it no solid
forms and the liquid obeys a classical conduction solution.
"""

import logging
import math
from typing import Tuple

from .errors import DomainError, InputError, RegimeError
from .model import Convective, DimensionlessGroups, ProblemSpec, critical_h0, groups_p2
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
)
from .roots import RootResult, solve_fixed_point
from .special import F1, erf, erfc

logger = logging.getLogger("stefan_kit.convective")


def F(x: float, groups: DimensionlessGroups) -> float:
    """b1 exp(-b x^2) / (1 + b2 erf(sqrt(b) x)) - b3 F1(x) for x >= 0."""
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"F is defined for x >= 0, got {x!r}")
    y = math.sqrt(groups.b) * x
    return groups.b1 * math.exp(-y * y) / (1.0 + groups.b2 * erf(y)) - groups.b3 * F1(x)


def classify_regime(spec: ProblemSpec) -> Regime:
    """Two-phase iff b1 > b3, i.e. h_0 > critical_h0; the threshold itself is pure conduction.

    Decided on the same groups that solve_lambda checks.
    """
    if not isinstance(spec.bc, Convective):
        raise InputError(f"classify_regime needs a convective spec, got {spec.kind}")
    if not spec.bc.h_0 > 0.0:
        raise InputError("h_0 must be positive")
    groups = groups_p2(spec)
    if groups.b1 > groups.b3:
        return Regime.TWO_PHASE
    return Regime.PURE_CONDUCTION


def solve_lambda(
    groups: DimensionlessGroups,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> RootResult:
    """Unique lambda > 0 with F(lambda) = lambda.

    F(0) = b1 - b3 > 0 certifies the left end, so the bracket starts at 0.

    Raises:
        RegimeError: If b1 <= b3; use pure_conduction_temperature instead
    """
    if not groups.b1 > groups.b3:
        raise RegimeError(
            "b1 <= b3: no solidification, the problem is pure conduction "
            "(use pure_conduction_temperature)"
        )
    result = solve_fixed_point(
        lambda x: F(x, groups), lower=0.0, upper=1.0, cap=cap, tol=tol, xtol=xtol
    )
    logger.debug(f"lambda = {result.root!r} after {result.iterations} iterations")
    return result


def solve_p2(
    spec: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> SimilaritySolution:
    """Similarity solution of the convective problem in either regime."""
    groups = groups_p2(spec)
    regime = classify_regime(spec)
    if regime is Regime.PURE_CONDUCTION:
        logger.info(
            f"h_0 = {spec.bc.h_0:.6g} <= critical {critical_h0(spec):.6g}: pure conduction"
        )
        return SimilaritySolution(spec=spec, groups=groups, regime=regime)
    root = solve_lambda(groups, tol=tol, xtol=xtol, cap=cap)
    logger.info(f"Convective solution: lambda = {root.root:.15g}, residual = {root.residual:.3e}")
    return SimilaritySolution(
        spec=spec,
        groups=groups,
        regime=regime,
        front_coeff=root.root,
        residual=root.residual,
        bracket=root.bracket,
    )


def _require_two_phase(sol: SimilaritySolution) -> Convective:
    if not isinstance(sol.spec.bc, Convective):
        raise InputError(f"expected a convective solution, got {sol.spec.kind}")
    if not sol.is_two_phase or sol.front_coeff is None:
        raise RegimeError("pure-conduction regime: use pure_conduction_temperature")
    return sol.spec.bc


def face_temperature_p2(sol: SimilaritySolution) -> float:
    """T_s(0,t) = T_inf + (T_f - T_inf) / (1 + b2 erf(lambda sqrt(b))), constant in t."""
    bc = _require_two_phase(sol)
    g = sol.groups
    denom = 1.0 + g.b2 * erf(sol.front_coeff * math.sqrt(g.b))
    return bc.T_inf + (sol.spec.material.T_f - bc.T_inf) / denom


def solid_temperature_p2(sol: SimilaritySolution, x: float, t: float) -> float:
    """Solid branch, any real x.

    When b2 erf(lambda sqrt(b)) > 1 the subtractive form anchored at T_f is used;
    both forms are algebraically equal.
    """
    bc = _require_two_phase(sol)
    g = sol.groups
    T_f = sol.spec.material.T_f
    z = x / (2.0 * math.sqrt(sol.spec.material.alpha_s * t))
    erf_front = erf(sol.front_coeff * math.sqrt(g.b))
    denom = 1.0 + g.b2 * erf_front
    if g.b2 * erf_front > 1.0:
        return T_f - g.b2 * (T_f - bc.T_inf) * (erf_front - erf(z)) / denom
    return bc.T_inf + (T_f - bc.T_inf) * (1.0 + g.b2 * erf(z)) / denom


def solid_gradient_p2(sol: SimilaritySolution, x: float, t: float) -> float:
    bc = _require_two_phase(sol)
    g = sol.groups
    m = sol.spec.material
    root = math.sqrt(m.alpha_s * t)
    z = x / (2.0 * root)
    denom = 1.0 + g.b2 * erf(sol.front_coeff * math.sqrt(g.b))
    return (m.T_f - bc.T_inf) * g.b2 * math.exp(-z * z) / (denom * math.sqrt(math.pi) * root)


def temperature_p2(sol: SimilaritySolution, x: float, t: float) -> Tuple[float, Phase]:
    """Temperature and phase of the two-phase convective solution.

    Raises:
        RegimeError: In the pure-conduction regime
    """
    _require_two_phase(sol)
    check_point(x, t)
    phase = classify_point(sol, x, t)
    if phase is Phase.INTERFACE:
        return sol.spec.material.T_f, phase
    if phase is Phase.SOLID:
        return solid_temperature_p2(sol, x, t), phase
    return liquid_temperature(sol.spec, sol.front_coeff, x, t), phase


def _conduction_ratio(spec: ProblemSpec) -> float:
    """k_l / (h_0 sqrt(pi alpha_l))."""
    m = spec.material
    return m.k_l / (spec.bc.h_0 * math.sqrt(math.pi * m.alpha_l))


def _require_pure_conduction(spec: ProblemSpec) -> Convective:
    if not isinstance(spec.bc, Convective):
        raise InputError(f"expected a convective spec, got {spec.kind}")
    if classify_regime(spec) is Regime.TWO_PHASE:
        raise RegimeError("h_0 above the threshold: the problem solidifies, use temperature_p2")
    return spec.bc


def pure_conduction_temperature(
    spec: ProblemSpec, x: float, t: float, *, any_x: bool = False
) -> float:
    """Liquid-only field T_i - (T_i - T_inf) erfc(x / (2 sqrt(alpha_l t))) / (1 + K).

    K = k_l / (h_0 sqrt(pi alpha_l)). Valid for 0 < h_0 <= critical_h0.
    ``any_x`` lifts the x >= 0 check for difference stencils at the face.

    Raises:
        RegimeError: If h_0 is above the threshold
    """
    bc = _require_pure_conduction(spec)
    if any_x:
        check_point(0.0, t)
    else:
        check_point(x, t)
    m = spec.material
    eta = x / (2.0 * math.sqrt(m.alpha_l * t))
    return spec.T_i - (spec.T_i - bc.T_inf) / (1.0 + _conduction_ratio(spec)) * erfc(eta)


def pure_conduction_gradient(spec: ProblemSpec, x: float, t: float) -> float:
    bc = _require_pure_conduction(spec)
    m = spec.material
    root = math.sqrt(m.alpha_l * t)
    eta = x / (2.0 * root)
    amplitude = (spec.T_i - bc.T_inf) / (1.0 + _conduction_ratio(spec))
    return amplitude * math.exp(-eta * eta) / (math.sqrt(math.pi) * root)


def pure_conduction_face_temperature(spec: ProblemSpec) -> float:
    """Face value T_i - (T_i - T_inf) / (1 + K); at least T_f below the threshold."""
    bc = _require_pure_conduction(spec)
    return spec.T_i - (spec.T_i - bc.T_inf) / (1.0 + _conduction_ratio(spec))
