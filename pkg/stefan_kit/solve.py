"""Dispatch over the three face conditions."""

from typing import Tuple

from . import convective, flux, neumann
from .errors import RegimeError
from .model import Convective, Dirichlet, ProblemSpec
from .neumann import DEFAULT_CAP, DEFAULT_TOL, DEFAULT_XTOL, Phase, SimilaritySolution


def solve(
    spec: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> SimilaritySolution:
    """Solve the problem described by ``spec``, classifying the regime first.

    Sub-threshold convective or flux data return a pure-conduction solution
    without a front coefficient.
    """
    if isinstance(spec.bc, Dirichlet):
        return neumann.solve_p1(spec, tol=tol, xtol=xtol, cap=cap)
    if isinstance(spec.bc, Convective):
        return convective.solve_p2(spec, tol=tol, xtol=xtol, cap=cap)
    return flux.solve_flux(spec, tol=tol, xtol=xtol, cap=cap)


def temperature(sol: SimilaritySolution, x: float, t: float) -> Tuple[float, Phase]:
    """Temperature and phase at (x, t) in either regime."""
    bc = sol.spec.bc
    if isinstance(bc, Dirichlet):
        return neumann.temperature_p1(sol, x, t)
    if not sol.is_two_phase:
        return liquid_field(sol, x, t), Phase.LIQUID
    if isinstance(bc, Convective):
        return convective.temperature_p2(sol, x, t)
    return flux.temperature_flux(sol, x, t)


def solid_field(sol: SimilaritySolution, x: float, t: float) -> float:
    """Solid branch continued to any real x.

    Raises:
        RegimeError: In the pure-conduction regime
    """
    neumann.check_point(0.0, t)
    bc = sol.spec.bc
    if isinstance(bc, Dirichlet):
        return neumann.solid_temperature_p1(sol, x, t)
    if isinstance(bc, Convective):
        return convective.solid_temperature_p2(sol, x, t)
    return flux.solid_temperature_flux(sol, x, t)


def liquid_field(sol: SimilaritySolution, x: float, t: float) -> float:
    """Liquid branch continued to any real x."""
    neumann.check_point(0.0, t)
    if sol.is_two_phase:
        return neumann.liquid_temperature(sol.spec, sol.front_coeff, x, t)
    if isinstance(sol.spec.bc, Convective):
        return convective.pure_conduction_temperature(sol.spec, x, t, any_x=True)
    return flux.pure_conduction_temperature_flux(sol.spec, x, t, any_x=True)


def solid_gradient(sol: SimilaritySolution, x: float, t: float) -> float:
    """Analytic x-derivative of the solid branch."""
    neumann.check_point(0.0, t)
    bc = sol.spec.bc
    if isinstance(bc, Dirichlet):
        return neumann.solid_gradient_p1(sol, x, t)
    if isinstance(bc, Convective):
        return convective.solid_gradient_p2(sol, x, t)
    return flux.solid_gradient_flux(sol, x, t)


def liquid_gradient(sol: SimilaritySolution, x: float, t: float) -> float:
    """Analytic x-derivative of the liquid branch."""
    neumann.check_point(0.0, t)
    if sol.is_two_phase:
        return neumann.liquid_gradient(sol.spec, sol.front_coeff, x, t)
    if isinstance(sol.spec.bc, Convective):
        return convective.pure_conduction_gradient(sol.spec, x, t)
    return flux.pure_conduction_gradient_flux(sol.spec, x, t)


def face_temperature(sol: SimilaritySolution) -> float:
    """Temperature at x = 0, which is constant in t for every similarity solution."""
    bc = sol.spec.bc
    if isinstance(bc, Dirichlet):
        return bc.T_0
    if isinstance(bc, Convective):
        if sol.is_two_phase:
            return convective.face_temperature_p2(sol)
        return convective.pure_conduction_face_temperature(sol.spec)
    if sol.is_two_phase:
        return flux.flux_face_temperature(sol)
    return flux.pure_conduction_face_temperature_flux(sol.spec)


def temperature_scale(sol: SimilaritySolution) -> float:
    """Spread between T_i and the coldest prescribed temperature; used to normalize residuals."""
    bc = sol.spec.bc
    if isinstance(bc, Dirichlet):
        low = bc.T_0
    elif isinstance(bc, Convective):
        low = bc.T_inf
    else:
        low = min(face_temperature(sol), sol.spec.material.T_f)
    return sol.spec.T_i - low


def require_two_phase(sol: SimilaritySolution) -> SimilaritySolution:
    if not sol.is_two_phase:
        raise RegimeError(f"{sol.spec.kind} problem is in the pure-conduction regime")
    return sol

