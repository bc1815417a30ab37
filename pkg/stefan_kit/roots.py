"""Bracketed solver for fixed-point equations g(x) = x with g - x decreasing."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import SolverError

logger = logging.getLogger("stefan_kit.roots")

EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class RootResult:
    """Outcome of a fixed-point solve.

    ``bracket`` is the final certificate: g(a) > a and g(b) < b unless the
    root was hit exactly.
    """

    root: float
    residual: float
    bracket: Tuple[float, float]
    iterations: int
    expansions: int


def solve_fixed_point(
    func: Callable[[float], float],
    lower: float = 1e-8,
    upper: float = 1.0,
    cap: float = 100.0,
    tol: float = 1e-12,
    xtol: float = 1e-13,
    max_iter: int = 400,
) -> RootResult:
    """Find the unique x with func(x) = x when func(x) - x is strictly decreasing.

    The upper end is doubled until func(upper) < upper; a lower end that is not
    a certificate is divided by 100. Odd iterations take a secant step inside
    the bracket, even ones bisect, so the width at least halves every two
    iterations.

    Args:
        func: The fixed-point map
        lower: Initial left end; 0 is accepted when func(0) > 0
        upper: Initial right end
        cap: Largest admissible right end
        tol: Residual tolerance on |func(x) - x|
        xtol: Bracket width tolerance
        max_iter: Iteration budget after bracketing

    Returns:
        RootResult with the root, its residual and the bracket certificate

    Raises:
        SolverError: If no bracket exists below ``cap`` or the budget runs out
    """

    def g(x: float) -> float:
        value = func(x) - x
        if math.isnan(value):
            raise SolverError(f"fixed-point map returned NaN at x = {x!r}")
        return value

    a = lower
    ga = g(a)
    while ga <= 0.0:
        if ga == 0.0:
            return RootResult(a, 0.0, (a, a), 0, 0)
        a /= 100.0
        if a < 1e-300:
            raise SolverError("could not find a left bracket end with g(x) > x")
        ga = g(a)

    b = max(upper, a)
    gb = g(b)
    expansions = 0
    while gb >= 0.0:
        if gb == 0.0:
            return RootResult(b, 0.0, (b, b), 0, expansions)
        a, ga = b, gb
        b *= 2.0
        expansions += 1
        if b > cap:
            raise SolverError(f"bracket expansion exceeded x = {cap:g} without a sign change")
        gb = g(b)

    logger.debug(f"Bracket [{a:.6g}, {b:.6g}] after {expansions} expansions")

    for iteration in range(1, max_iter + 1):
        x = math.nan
        if iteration % 2 == 1 and ga != gb:
            x = b - gb * (b - a) / (gb - ga)
        if not (a < x < b):
            x = 0.5 * (a + b)
        gx = g(x)

        if gx == 0.0:
            return RootResult(x, 0.0, (x, x), iteration, expansions)
        if gx > 0.0:
            a, ga = x, gx
        else:
            b, gb = x, gx

        width = b - a
        best, g_best = (a, ga) if abs(ga) <= abs(gb) else (b, gb)
        resolved = width <= 4.0 * EPS * max(abs(a), abs(b))
        if (abs(g_best) <= tol and width <= xtol) or resolved:
            if abs(g_best) > tol:
                raise SolverError(
                    f"bracket collapsed at x = {best!r} with residual {g_best:.3e} above {tol:g}"
                )
            logger.debug(f"Converged to {best!r} in {iteration} iterations, residual {g_best:.3e}")
            return RootResult(best, abs(g_best), (a, b), iteration, expansions)

    raise SolverError(f"no convergence within {max_iter} iterations, bracket [{a!r}, {b!r}]")
