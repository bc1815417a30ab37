"""Imposed-temperature problem: the Neumann solution.

The front is s(t) = 2 xi sqrt(alpha_l t) with xi the unique root of G(x) = x,
G(x) = b4 F2(sqrt(b) x) - b3 F1(x).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .errors import DomainError, InputError, RegimeError
from .model import Dirichlet, DimensionlessGroups, ProblemSpec, groups_p1
from .roots import RootResult, solve_fixed_point
from .special import F1, F2, erf, erfc_ratio, erfcx

logger = logging.getLogger("stefan_kit.neumann")

DEFAULT_TOL = 1e-12
DEFAULT_XTOL = 1e-13
DEFAULT_CAP = 100.0
INTERFACE_RTOL = 1e-12


class Regime(str, Enum):
    """Outcome of the regime classification."""

    TWO_PHASE = "two_phase"
    PURE_CONDUCTION = "pure_conduction"


class Phase(str, Enum):
    """Phase tag of an evaluated temperature."""

    SOLID = "solid"
    INTERFACE = "interface"
    LIQUID = "liquid"


@dataclass(frozen=True)
class SimilaritySolution:
    """Solved similarity solution of one problem.

    ``front_coeff`` is None in the pure-conduction regime. ``front_diffusivity``
    is alpha_l, so that s(t) = 2 front_coeff sqrt(front_diffusivity t).
    """

    spec: ProblemSpec
    groups: DimensionlessGroups
    regime: Regime
    front_coeff: Optional[float] = None
    residual: Optional[float] = None
    bracket: Optional[Tuple[float, float]] = None

    @property
    def front_diffusivity(self) -> float:
        return self.spec.material.alpha_l

    @property
    def is_two_phase(self) -> bool:
        return self.regime is Regime.TWO_PHASE


def check_point(x: float, t: float) -> None:
    """Validate a field evaluation point (x >= 0, t > 0)."""
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"similarity fields need t > 0, got t = {t!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"similarity fields need x >= 0, got x = {x!r}")


def G(x: float, groups: DimensionlessGroups) -> float:
    """Left side of the fixed-point equation G(x) = x for x > 0."""
    if not x > 0.0:
        raise DomainError(f"G is defined for x > 0, got {x!r}")
    return groups.b4 * F2(math.sqrt(groups.b) * x) - groups.b3 * F1(x)


def solve_xi(
    groups: DimensionlessGroups,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> RootResult:
    """Unique xi > 0 with G(xi) = xi, bracketed from [1e-8, 1].

    Raises:
        InputError: If b4 <= 0 (no phase change under Dirichlet data)
        SolverError: If the bracket cannot be closed below ``cap``
    """
    if not groups.b4 > 0.0:
        raise InputError("no phase change under Dirichlet data: b4 must be positive")
    result = solve_fixed_point(
        lambda x: G(x, groups), lower=1e-8, upper=1.0, cap=cap, tol=tol, xtol=xtol
    )
    logger.debug(f"xi = {result.root!r} after {result.iterations} iterations")
    return result


def solve_p1(
    spec: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> SimilaritySolution:
    """Neumann solution of the imposed-temperature problem."""
    groups = groups_p1(spec)
    root = solve_xi(groups, tol=tol, xtol=xtol, cap=cap)
    logger.info(f"Neumann solution: xi = {root.root:.15g}, residual = {root.residual:.3e}")
    return SimilaritySolution(
        spec=spec,
        groups=groups,
        regime=Regime.TWO_PHASE,
        front_coeff=root.root,
        residual=root.residual,
        bracket=root.bracket,
    )


def front_position(sol: SimilaritySolution, t: float) -> float:
    """Front s(t) = 2 front_coeff sqrt(alpha_l t); s(0) = 0.

    Raises:
        RegimeError: In the pure-conduction regime (no front exists)
    """
    if not sol.is_two_phase or sol.front_coeff is None:
        raise RegimeError("no front exists in the pure-conduction regime")
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"front position needs t >= 0, got {t!r}")
    return 2.0 * sol.front_coeff * math.sqrt(sol.front_diffusivity * t)


def front_velocity(sol: SimilaritySolution, t: float) -> float:
    """ds/dt = front_coeff sqrt(alpha_l / t)."""
    if t <= 0.0:
        raise DomainError(f"front velocity needs t > 0, got {t!r}")
    return front_position(sol, t) / (2.0 * t)


def classify_point(sol: SimilaritySolution, x: float, t: float) -> Phase:
    """Phase of (x, t); points within 1e-12 max(1, s) of the front are the interface."""
    s = front_position(sol, t)
    if abs(x - s) <= INTERFACE_RTOL * max(1.0, s):
        return Phase.INTERFACE
    return Phase.SOLID if x < s else Phase.LIQUID


def liquid_temperature(spec: ProblemSpec, coeff: float, x: float, t: float) -> float:
    """T_i - (T_i - T_f) erfc(eta) / erfc(coeff), eta = x / (2 sqrt(alpha_l t))."""
    m = spec.material
    eta = x / (2.0 * math.sqrt(m.alpha_l * t))
    return spec.T_i - (spec.T_i - m.T_f) * erfc_ratio(eta, coeff)


def liquid_gradient(spec: ProblemSpec, coeff: float, x: float, t: float) -> float:
    """x-derivative of liquid_temperature."""
    m = spec.material
    root = math.sqrt(m.alpha_l * t)
    eta = x / (2.0 * root)
    decay = math.exp(-(eta - coeff) * (eta + coeff)) / erfcx(coeff)
    return (spec.T_i - m.T_f) * decay / (math.sqrt(math.pi) * root)


def _require_p1(sol: SimilaritySolution) -> Dirichlet:
    if not isinstance(sol.spec.bc, Dirichlet):
        raise InputError(f"expected a Dirichlet solution, got {sol.spec.kind}")
    if sol.front_coeff is None:
        raise RegimeError("solution has no front coefficient")
    return sol.spec.bc


def solid_temperature_p1(sol: SimilaritySolution, x: float, t: float) -> float:
    """Solid branch T_0 + (T_f - T_0) erf(x / (2 sqrt(alpha_s t))) / erf(xi sqrt(b)).

    Evaluated for any real x, so difference stencils may reach past x = 0.
    """
    bc = _require_p1(sol)
    m = sol.spec.material
    z = x / (2.0 * math.sqrt(m.alpha_s * t))
    return bc.T_0 + (m.T_f - bc.T_0) * erf(z) / erf(sol.front_coeff * math.sqrt(sol.groups.b))


def solid_gradient_p1(sol: SimilaritySolution, x: float, t: float) -> float:
    bc = _require_p1(sol)
    m = sol.spec.material
    root = math.sqrt(m.alpha_s * t)
    z = x / (2.0 * root)
    scale = (m.T_f - bc.T_0) / erf(sol.front_coeff * math.sqrt(sol.groups.b))
    return scale * math.exp(-z * z) / (math.sqrt(math.pi) * root)


def temperature_p1(sol: SimilaritySolution, x: float, t: float) -> Tuple[float, Phase]:
    """Temperature and phase of the Neumann solution at (x, t)."""
    _require_p1(sol)
    check_point(x, t)
    phase = classify_point(sol, x, t)
    if phase is Phase.INTERFACE:
        return sol.spec.material.T_f, phase
    if phase is Phase.SOLID:
        return solid_temperature_p1(sol, x, t), phase
    return liquid_temperature(sol.spec, sol.front_coeff, x, t), phase
