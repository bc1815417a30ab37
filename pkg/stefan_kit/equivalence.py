"""Maps between the imposed-temperature and the convective problems.

A Dirichlet problem with face temperature T_0 and a convective problem with
data (h_0, T_inf) describe the same solidification when

    T_0 = T_inf + (T_f - T_inf) / (1 + b2 erf(lambda sqrt(b)))
    h_0 = k_s (T_f - T_0) / (sqrt(pi alpha_s) erf(xi sqrt(b)) (T_0 - T_inf))

and then xi = lambda. The module also evaluates the resulting bounds on
erf(xi sqrt(b)) and sweeps lambda over the heat transfer coefficient.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .convective import F, classify_regime, solve_p2, temperature_p2
from .errors import InputError, RegimeError
from .model import Convective, Dirichlet, ProblemSpec, critical_h0, groups_p1, groups_p2
from .neumann import (
    DEFAULT_CAP,
    DEFAULT_TOL,
    DEFAULT_XTOL,
    G,
    Regime,
    SimilaritySolution,
    front_position,
    solve_p1,
    temperature_p1,
)
from .special import erf

logger = logging.getLogger("stefan_kit.equivalence")

DEFAULT_ROUNDTRIP_TOL = 1e-10
FIELD_RTOL = 1e-9
DEFAULT_TIMES = (1.0, 10.0, 100.0, 1000.0, 3600.0)


@dataclass(frozen=True)
class XiBounds:
    """Upper bounds on erf(xi sqrt(b)) implied by the equivalence.

    ``bound_44`` depends on the bulk temperature T_inf and is None without one;
    ``bound_46`` is its infimum over T_inf.
    """

    erf_front: float
    bound_46: float
    bound_44: Optional[float] = None
    physical_44: Optional[bool] = None

    @property
    def holds(self) -> bool:
        bound = self.bound_46 if self.bound_44 is None else self.bound_44
        return self.erf_front < bound


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of one equivalence round trip."""

    direction: str
    xi: float
    lam: float
    mapped_T0: float
    mapped_h0: float
    T_inf: float
    bound_44: float
    bound_46: float
    physical_44: bool
    roundtrip_gap: float
    field_gap: float
    coincidence_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.roundtrip_gap <= self.tolerance and self.field_gap <= FIELD_RTOL

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        data["passed"] = self.passed
        return data


@dataclass(frozen=True)
class SweepPoint:
    """One entry of a lambda(h_0) sweep; flagged entries carry no values."""

    h0: float
    lam: Optional[float] = None
    T0_equiv: Optional[float] = None
    flagged: bool = False
    reason: Optional[str] = None


def t0_from_convective(spec: ProblemSpec, lam: float) -> float:
    """Face temperature of the Dirichlet problem equivalent to a solidifying convective one.

    Raises:
        RegimeError: If the convective data lie in the pure-conduction regime
    """
    if classify_regime(spec) is Regime.PURE_CONDUCTION:
        raise RegimeError("pure-conduction data have no equivalent Dirichlet problem")
    groups = groups_p2(spec)
    T_f, T_inf = spec.material.T_f, spec.bc.T_inf
    return T_inf + (T_f - T_inf) / (1.0 + groups.b2 * erf(lam * math.sqrt(groups.b)))


def h0_from_dirichlet(spec: ProblemSpec, T_inf: float, xi: float) -> float:
    """Heat transfer coefficient of the convective problem equivalent to ``spec``.

    The result is checked to lie above the solidification threshold.

    Raises:
        InputError: If T_inf >= T_0
        RegimeError: If the mapped coefficient fails the threshold
    """
    if not isinstance(spec.bc, Dirichlet):
        raise InputError(f"h0_from_dirichlet needs a Dirichlet spec, got {spec.kind}")
    T_0 = spec.bc.T_0
    if not T_inf < T_0:
        raise InputError(f"invalid bulk temperature: T_inf = {T_inf} must be below T_0 = {T_0}")
    m = spec.material
    b = m.alpha_l / m.alpha_s
    h0 = m.k_s * (m.T_f - T_0) / (
        math.sqrt(math.pi * m.alpha_s) * erf(xi * math.sqrt(b)) * (T_0 - T_inf)
    )
    threshold = critical_h0(spec.with_bc(Convective(h_0=h0, T_inf=T_inf)))
    if not h0 > threshold:
        raise RegimeError(f"mapped h_0 = {h0!r} does not exceed the threshold {threshold!r}")
    return h0


def coincidence_gap(spec_p1: ProblemSpec, T_inf: float, x: float, xi: float) -> float:
    """G(x) - F(x) under the mapped data; zero at x = xi and nowhere else."""
    h0 = h0_from_dirichlet(spec_p1, T_inf, xi)
    spec_p2 = spec_p1.with_bc(Convective(h_0=h0, T_inf=T_inf))
    return G(x, groups_p1(spec_p1)) - F(x, groups_p2(spec_p2))


def xi_bounds(
    spec_p1: ProblemSpec, T_inf: Optional[float] = None, xi: Optional[float] = None
) -> XiBounds:
    """Evaluate erf(xi sqrt(b)) and its two upper bounds.

    bound_46 = (k_s / k_l) sqrt(alpha_l / alpha_s) (T_f - T_0) / (T_i - T_f) and
    bound_44 = bound_46 (T_i - T_inf) / (T_0 - T_inf), which increases with T_inf
    and decreases to bound_46 as T_inf goes to minus infinity.
    """
    if not isinstance(spec_p1.bc, Dirichlet):
        raise InputError(f"xi_bounds needs a Dirichlet spec, got {spec_p1.kind}")
    m = spec_p1.material
    T_0 = spec_p1.bc.T_0
    b = m.alpha_l / m.alpha_s
    if xi is None:
        xi = solve_p1(spec_p1).front_coeff
    dT = spec_p1.T_i - m.T_f
    if dT > 0.0:
        bound_46 = m.k_s / m.k_l * math.sqrt(b) * (m.T_f - T_0) / dT
    else:
        bound_46 = math.inf
    bound_44 = physical_44 = None
    if T_inf is not None:
        if not T_inf < T_0:
            raise InputError(f"bound_44 needs T_inf < T_0, got T_inf = {T_inf}")
        bound_44 = bound_46 * (spec_p1.T_i - T_inf) / (T_0 - T_inf)
        physical_44 = bound_44 < 1.0
    return XiBounds(
        erf_front=erf(xi * math.sqrt(b)),
        bound_46=bound_46,
        bound_44=bound_44,
        physical_44=physical_44,
    )


def _sample_points(sol: SimilaritySolution, times: Sequence[float], n_x: int):
    """(x, t) grid covering the solid and several liquid diffusion lengths."""
    for t in times:
        far = front_position(sol, t) + 6.0 * math.sqrt(sol.spec.material.alpha_l * t)
        for x in np.linspace(0.0, far, n_x):
            yield float(x), float(t)


def field_gap(
    sol_p1: SimilaritySolution,
    sol_p2: SimilaritySolution,
    times: Sequence[float] = DEFAULT_TIMES,
    n_x: int = 50,
) -> float:
    """Largest |T_P1 - T_P2| on the sample grid, relative to T_i - T_inf."""
    scale = sol_p2.spec.T_i - sol_p2.spec.bc.T_inf
    worst = 0.0
    for x, t in _sample_points(sol_p1, times, n_x):
        T1, _ = temperature_p1(sol_p1, x, t)
        T2, _ = temperature_p2(sol_p2, x, t)
        worst = max(worst, abs(T1 - T2))
    return worst / scale


def roundtrip_check(
    spec_p1: ProblemSpec,
    T_inf: float,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
    roundtrip_tol: float = DEFAULT_ROUNDTRIP_TOL,
    times: Sequence[float] = DEFAULT_TIMES,
) -> EquivalenceReport:
    """Dirichlet -> convective: solve xi, map to h_0, solve lambda and compare."""
    sol_p1 = solve_p1(spec_p1, tol=tol, xtol=xtol, cap=cap)
    xi = sol_p1.front_coeff
    h0 = h0_from_dirichlet(spec_p1, T_inf, xi)
    spec_p2 = spec_p1.with_bc(Convective(h_0=h0, T_inf=T_inf))
    sol_p2 = solve_p2(spec_p2, tol=tol, xtol=xtol, cap=cap)
    if not sol_p2.is_two_phase:
        raise RegimeError("mapped convective problem does not solidify")
    return _report(
        "dirichlet_to_convective", sol_p1, sol_p2, spec_p1.bc.T_0, h0, roundtrip_tol, times
    )


def roundtrip_check_convective(
    spec_p2: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
    roundtrip_tol: float = DEFAULT_ROUNDTRIP_TOL,
    times: Sequence[float] = DEFAULT_TIMES,
) -> EquivalenceReport:
    """Convective -> Dirichlet: solve lambda, map to T_0, solve xi and compare.

    Raises:
        RegimeError: If the convective data lie in the pure-conduction regime
    """
    sol_p2 = solve_p2(spec_p2, tol=tol, xtol=xtol, cap=cap)
    if not sol_p2.is_two_phase:
        raise RegimeError("pure-conduction data have no equivalent Dirichlet problem")
    T_0 = t0_from_convective(spec_p2, sol_p2.front_coeff)
    spec_p1 = spec_p2.with_bc(Dirichlet(T_0=T_0))
    sol_p1 = solve_p1(spec_p1, tol=tol, xtol=xtol, cap=cap)
    h0 = h0_from_dirichlet(spec_p1, spec_p2.bc.T_inf, sol_p1.front_coeff)
    return _report("convective_to_dirichlet", sol_p1, sol_p2, T_0, h0, roundtrip_tol, times)


def _report(
    direction: str,
    sol_p1: SimilaritySolution,
    sol_p2: SimilaritySolution,
    T_0: float,
    h0: float,
    roundtrip_tol: float,
    times: Sequence[float],
) -> EquivalenceReport:
    xi, lam = sol_p1.front_coeff, sol_p2.front_coeff
    T_inf = sol_p2.spec.bc.T_inf
    bounds = xi_bounds(sol_p1.spec, T_inf, xi=xi)
    coincidence = max(abs(G(xi, sol_p1.groups) - xi), abs(F(xi, sol_p2.groups) - xi))
    report = EquivalenceReport(
        direction=direction,
        xi=xi,
        lam=lam,
        mapped_T0=T_0,
        mapped_h0=h0,
        T_inf=T_inf,
        bound_44=bounds.bound_44,
        bound_46=bounds.bound_46,
        physical_44=bounds.physical_44,
        roundtrip_gap=abs(lam - xi),
        field_gap=field_gap(sol_p1, sol_p2, times),
        coincidence_residual=coincidence,
        tolerance=roundtrip_tol,
    )
    log = logger.info if report.passed else logger.warning
    log(
        f"Equivalence {direction}: xi = {xi:.15g}, lambda = {lam:.15g}, "
        f"gap = {report.roundtrip_gap:.3e}, field gap = {report.field_gap:.3e}"
    )
    return report


def lambda_limit(
    spec_p2: ProblemSpec,
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
) -> float:
    """Limit of lambda as h_0 grows without bound: xi of the problem with T_0 = T_inf."""
    if not isinstance(spec_p2.bc, Convective):
        raise InputError(f"lambda_limit needs a convective spec, got {spec_p2.kind}")
    spec_p1 = spec_p2.with_bc(Dirichlet(T_0=spec_p2.bc.T_inf))
    return solve_p1(spec_p1, tol=tol, xtol=xtol, cap=cap).front_coeff


def log_grid(lo: float, hi: float, n: int, log: bool = True) -> List[float]:
    """n points from lo to hi, log-spaced unless ``log`` is False."""
    if n < 2:
        raise InputError(f"a grid needs at least 2 points, got {n}")
    if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo < hi):
        raise InputError(f"a grid needs 0 < lo < hi, got {lo!r}:{hi!r}")
    points = np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)
    return [float(p) for p in points]


@dataclass(frozen=True)
class SweepCheck:
    """Shape of a sweep: lambda rises with h_0 and stays below its T_0 = T_inf limit."""

    monotone: bool
    bounded: bool
    limit: float
    solved: int


def check_sweep(points: Sequence[SweepPoint], limit: float, slack: float = 0.0) -> SweepCheck:
    """Check the solidifying entries of a sweep, taken in increasing h_0.

    Equal h_0 must give equal lambda; ``slack`` is the root tolerance allowed
    above ``limit``.
    """
    solved = sorted((p.h0, p.lam) for p in points if not p.flagged)
    monotone = all(
        lam_b > lam_a if h_b > h_a else lam_b == lam_a
        for (h_a, lam_a), (h_b, lam_b) in zip(solved, solved[1:])
    )
    bounded = all(lam < limit + slack for _, lam in solved)
    return SweepCheck(monotone=monotone, bounded=bounded, limit=limit, solved=len(solved))


def lambda_sweep(
    spec: ProblemSpec,
    h0_grid: Sequence[float],
    tol: float = DEFAULT_TOL,
    xtol: float = DEFAULT_XTOL,
    cap: float = DEFAULT_CAP,
    workers: int = 1,
) -> List[SweepPoint]:
    """lambda and the equivalent T_0 for each h_0 of the grid, in grid order.

    Entries at or below the threshold are flagged rather than raising.
    """
    if not isinstance(spec.bc, Convective):
        raise InputError(f"lambda_sweep needs a convective template, got {spec.kind}")
    T_inf = spec.bc.T_inf

    def evaluate(h0: float) -> SweepPoint:
        if not (math.isfinite(h0) and h0 > 0.0):
            return SweepPoint(h0=h0, flagged=True, reason="h_0 must be positive")
        entry = spec.with_bc(Convective(h_0=h0, T_inf=T_inf))
        sol = solve_p2(entry, tol=tol, xtol=xtol, cap=cap)
        if not sol.is_two_phase:
            return SweepPoint(h0=h0, flagged=True, reason="pure conduction")
        return SweepPoint(
            h0=h0, lam=sol.front_coeff, T0_equiv=t0_from_convective(entry, sol.front_coeff)
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(evaluate, h0_grid))
    else:
        points = [evaluate(h0) for h0 in h0_grid]

    for point in points:
        if point.flagged:
            logger.warning(f"Sweep entry h_0 = {point.h0!r} flagged: {point.reason}")
    if any(not point.flagged for point in points):
        check = check_sweep(points, lambda_limit(spec, tol=tol, xtol=xtol, cap=cap), slack=xtol)
        if not check.monotone:
            logger.warning("Sweep lambda is not increasing in h_0")
        if not check.bounded:
            logger.warning(f"Sweep lambda reaches the limit {check.limit!r}")
    return points
