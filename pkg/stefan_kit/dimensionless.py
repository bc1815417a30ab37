"""Dimensionless form of the imposed-temperature and convective problems.

With a length L, eta = x / L, tau = alpha t / L^2 (alpha = alpha_s by default,
alpha_l for the "liquid" time scale), r(tau) = s(t) / L and
theta = (T - T_f) / (T_i - T_f). The problem is then fixed by the Stefan
number, the conductivity and diffusivity ratios and, for the convective face,
the Biot coefficient B and theta_inf.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .convective import solve_lambda
from .errors import DomainError, InputError, RegimeError
from .model import Convective, Dirichlet, DimensionlessGroups, ProblemSpec, groups_p2
from .neumann import (
    DEFAULT_CAP,
    DEFAULT_TOL,
    DEFAULT_XTOL,
    INTERFACE_RTOL,
    Phase,
    solve_xi,
)
from .solve import solve, temperature, temperature_scale
from .special import erf, erfc_ratio

logger = logging.getLogger("stefan_kit.dimensionless")

TIME_SCALES = ("solid", "liquid")


@dataclass(frozen=True)
class DimensionlessProblem:
    """Dimensionless data of one problem and its coordinate maps."""

    kind: str
    L: float
    time_scale: str
    reference_diffusivity: float
    T_f: float
    delta_T: float
    Ste: float
    k_ratio: float
    alpha_ratio: float
    B: Optional[float] = None
    theta_inf: Optional[float] = None
    theta_0: Optional[float] = None

    def eta(self, x: float) -> float:
        return x / self.L

    def tau(self, t: float) -> float:
        return self.reference_diffusivity * t / self.L**2

    def x_of(self, eta: float) -> float:
        return eta * self.L

    def t_of(self, tau: float) -> float:
        return tau * self.L**2 / self.reference_diffusivity

    def theta(self, T: float) -> float:
        return (T - self.T_f) / self.delta_T

    def temperature(self, theta: float) -> float:
        return self.T_f + self.delta_T * theta

    @property
    def biot(self) -> Optional[float]:
        """Coefficient of 1/sqrt(tau) in the dimensionless face condition."""
        if self.B is None:
            return None
        if self.time_scale == "liquid":
            return self.B * math.sqrt(self.alpha_ratio)
        return self.B

    @property
    def solidifies(self) -> Optional[bool]:
        """B > (k_l / k_s) sqrt(alpha_s / (pi alpha_l)) / theta_inf; None for Dirichlet data."""
        if self.B is None:
            return None
        return self.B > self.k_ratio / math.sqrt(math.pi * self.alpha_ratio) / self.theta_inf


def to_dimensionless(
    spec: ProblemSpec, L: float, time_scale: str = "solid"
) -> DimensionlessProblem:
    """Dimensionless data of a Dirichlet or convective spec.

    Raises:
        InputError: On L <= 0, an unknown time scale, T_i = T_f or flux data
    """
    if not (math.isfinite(L) and L > 0.0):
        raise InputError(f"characteristic length must be positive, got {L!r}")
    if time_scale not in TIME_SCALES:
        raise InputError(f"time_scale must be one of {TIME_SCALES}, got {time_scale!r}")
    m = spec.material
    dT = spec.T_i - m.T_f
    if not dT > 0.0:
        raise InputError("the dimensionless form needs T_i > T_f")
    common = dict(
        kind=spec.kind,
        L=L,
        time_scale=time_scale,
        reference_diffusivity=m.alpha_s if time_scale == "solid" else m.alpha_l,
        T_f=m.T_f,
        delta_T=dT,
        Ste=m.c_s * dT / m.latent_heat,
        k_ratio=m.k_l / m.k_s,
        alpha_ratio=m.alpha_l / m.alpha_s,
    )
    if isinstance(spec.bc, Dirichlet):
        return DimensionlessProblem(theta_0=(m.T_f - spec.bc.T_0) / dT, **common)
    if isinstance(spec.bc, Convective):
        groups = groups_p2(spec)
        problem = DimensionlessProblem(B=groups.B, theta_inf=groups.theta_inf, **common)
        logger.debug(f"B = {problem.B!r}, theta_inf = {problem.theta_inf!r}")
        return problem
    raise InputError("the dimensionless form covers Dirichlet and convective data only")


def groups_from_dimensionless(problem: DimensionlessProblem) -> DimensionlessGroups:
    """The groups b, b1..b4 rebuilt from dimensionless data alone."""
    b = problem.alpha_ratio
    b3 = problem.Ste * problem.k_ratio / (b * math.sqrt(math.pi))
    if problem.theta_0 is not None:
        b4 = problem.Ste * problem.theta_0 / math.sqrt(math.pi * b)
        return DimensionlessGroups(b=b, b3=b3, b4=b4, Ste=problem.Ste)
    return DimensionlessGroups(
        b=b,
        b1=problem.B * problem.Ste * problem.theta_inf / math.sqrt(b),
        b2=problem.B * math.sqrt(math.pi),
        b3=b3,
        Ste=problem.Ste,
        B=problem.B,
        theta_inf=problem.theta_inf,
    )


@dataclass(frozen=True)
class DimensionlessSolution:
    problem: DimensionlessProblem
    groups: DimensionlessGroups
    front_coeff: float

    def _solid_arg(self, eta: float, tau: float) -> float:
        """x / (2 sqrt(alpha_s t)) in dimensionless coordinates."""
        if self.problem.time_scale == "liquid":
            return eta * math.sqrt(self.groups.b) / (2.0 * math.sqrt(tau))
        return eta / (2.0 * math.sqrt(tau))

    def _liquid_arg(self, eta: float, tau: float) -> float:
        """x / (2 sqrt(alpha_l t)) in dimensionless coordinates."""
        if self.problem.time_scale == "liquid":
            return eta / (2.0 * math.sqrt(tau))
        return eta / (2.0 * math.sqrt(self.groups.b * tau))

    def front(self, tau: float) -> float:
        """r(tau) = 2 coeff sqrt(b tau), or 2 coeff sqrt(tau) on the liquid time scale."""
        if tau < 0.0:
            raise DomainError(f"tau must be non-negative, got {tau!r}")
        if self.problem.time_scale == "liquid":
            return 2.0 * self.front_coeff * math.sqrt(tau)
        return 2.0 * self.front_coeff * math.sqrt(self.groups.b * tau)

    def theta_solid(self, eta: float, tau: float) -> float:
        g = self.groups
        erf_front = erf(self.front_coeff * math.sqrt(g.b))
        z = self._solid_arg(eta, tau)
        if self.problem.theta_0 is not None:
            return self.problem.theta_0 * (erf(z) / erf_front - 1.0)
        return self.problem.theta_inf * g.b2 * (erf(z) - erf_front) / (1.0 + g.b2 * erf_front)

    def theta_solid_gradient(self, eta: float, tau: float) -> float:
        """d theta_s / d eta."""
        g = self.groups
        erf_front = erf(self.front_coeff * math.sqrt(g.b))
        z = self._solid_arg(eta, tau)
        dz = self._solid_arg(1.0, tau)
        d_erf = 2.0 / math.sqrt(math.pi) * math.exp(-z * z) * dz
        if self.problem.theta_0 is not None:
            return self.problem.theta_0 * d_erf / erf_front
        return self.problem.theta_inf * g.b2 * d_erf / (1.0 + g.b2 * erf_front)

    def theta_liquid(self, eta: float, tau: float) -> float:
        return 1.0 - erfc_ratio(self._liquid_arg(eta, tau), self.front_coeff)

    def theta(self, eta: float, tau: float) -> Tuple[float, Phase]:
        """Dimensionless temperature and phase at (eta, tau)."""
        if not (math.isfinite(tau) and tau > 0.0):
            raise DomainError(f"dimensionless fields need tau > 0, got {tau!r}")
        if not (math.isfinite(eta) and eta >= 0.0):
            raise DomainError(f"dimensionless fields need eta >= 0, got {eta!r}")
        r = self.front(tau)
        if abs(eta - r) <= INTERFACE_RTOL * max(1.0, r):
            return 0.0, Phase.INTERFACE
        if eta < r:
            return self.theta_solid(eta, tau), Phase.SOLID
        return self.theta_liquid(eta, tau), Phase.LIQUID

    def robin_residual(self, tau: float) -> float:
        """theta_eta(0) - Biot / sqrt(tau) (theta_s(0) + theta_inf), relative to the first term."""
        if self.problem.B is None:
            raise InputError("the face condition residual needs convective data")
        gradient = self.theta_solid_gradient(0.0, tau)
        offset = self.theta_solid(0.0, tau) + self.problem.theta_inf
        rhs = self.problem.biot / math.sqrt(tau) * offset
        return abs(gradient - rhs) / abs(gradient)


def solve_dimensionless(
    problem: DimensionlessProblem,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> DimensionlessSolution:
    """Solve the transcendental equation from dimensionless data only.

    Raises:
        RegimeError: If convective data do not solidify
    """
    groups = groups_from_dimensionless(problem)
    if problem.theta_0 is not None:
        root = solve_xi(groups, tol=tol, xtol=xtol, cap=cap)
    else:
        if not problem.solidifies:
            raise RegimeError("dimensionless data fail the solidification inequality")
        root = solve_lambda(groups, tol=tol, xtol=xtol, cap=cap)
    return DimensionlessSolution(problem=problem, groups=groups, front_coeff=root.root)


@dataclass(frozen=True)
class DimensionlessRoundTrip:
    """Gaps between the dimensional fields and the back-mapped dimensionless ones."""

    L: float
    time_scale: str
    field_gap: float
    front_gap: float
    coeff_gap: float
    robin_residual: Optional[float] = None


def dimensionless_roundtrip(
    spec: ProblemSpec,
    L: float,
    time_scale: str = "solid",
    times: Sequence[float] = (1.0, 100.0, 3600.0),
    n_x: int = 50,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> DimensionlessRoundTrip:
    """Solve dimensionally and dimensionlessly, map back and compare.

    ``field_gap`` is relative to the temperature spread of the problem,
    ``front_gap`` relative to s(t).

    Raises:
        RegimeError: If the dimensional problem does not solidify
    """
    sol = solve(spec, tol=tol, xtol=xtol, cap=cap)
    if not sol.is_two_phase:
        raise RegimeError("the dimensionless round trip needs a solidifying problem")
    problem = to_dimensionless(spec, L, time_scale)
    dsol = solve_dimensionless(problem, tol=tol, xtol=xtol, cap=cap)
    scale = temperature_scale(sol)
    m = spec.material

    field_gap = front_gap = 0.0
    for t in times:
        tau = problem.tau(t)
        s = 2.0 * sol.front_coeff * math.sqrt(m.alpha_l * t)
        front_gap = max(front_gap, abs(problem.x_of(dsol.front(tau)) - s) / s)
        far = s + 6.0 * math.sqrt(m.alpha_l * t)
        for x in np.linspace(0.0, far, n_x):
            T, _ = temperature(sol, float(x), t)
            theta, _ = dsol.theta(problem.eta(float(x)), tau)
            field_gap = max(field_gap, abs(problem.temperature(theta) - T) / scale)

    robin = None
    if problem.B is not None:
        robin = max(dsol.robin_residual(problem.tau(t)) for t in times)
    result = DimensionlessRoundTrip(
        L=L,
        time_scale=time_scale,
        field_gap=field_gap,
        front_gap=front_gap,
        coeff_gap=abs(dsol.front_coeff - sol.front_coeff),
        robin_residual=robin,
    )
    logger.info(
        f"Dimensionless round trip (L = {L:g}, {time_scale}): field gap {field_gap:.3e}, "
        f"front gap {front_gap:.3e}"
    )
    return result
