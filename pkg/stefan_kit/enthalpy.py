"""Explicit enthalpy-method march used as an independent check of the front.

The march is seeded from a similarity solution at t0 and never consults it
again; the front is recovered from the liquid fraction of every node and
compared against 2 coeff sqrt(alpha_l t) afterwards.

Nodes x_i = i dx, i = 0..N. Node 0 owns the half cell [0, dx/2] and carries
the face condition, node N is held at T_i. Volumetric enthalpy is measured
from solid at T_f:

    E = rho c_s (T - T_f)             solid
    0 <= E <= rho l                   mushy, T = T_f
    E = rho l + rho c_l (T - T_f)     liquid
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np
from numba import njit

from .errors import InputError, RegimeError, StabilityError
from .model import Convective, Dirichlet, ProblemSpec
from .neumann import SimilaritySolution, front_position
from .solve import solid_field, liquid_field

logger = logging.getLogger("stefan_kit.enthalpy")

BC_DIRICHLET = 0
BC_CONVECTIVE = 1
BC_FLUX = 2

DEFAULT_DT_FACTOR = 0.4
MAX_RECORDS = 100


@njit(cache=True)
def _node_state(E, rho, c_s, c_l, k_s, k_l, latent, T_f, T, k):
    """Fill temperature and conductivity arrays from enthalpy."""
    for i in range(E.shape[0]):
        e = E[i]
        if e < 0.0:
            T[i] = T_f + e / (rho * c_s)
            k[i] = k_s
        elif e > rho * latent:
            T[i] = T_f + (e - rho * latent) / (rho * c_l)
            k[i] = k_l
        else:
            f = e / (rho * latent)
            T[i] = T_f
            k[i] = k_s * (1.0 - f) + k_l * f


@njit(cache=True)
def _march(
    E, n_steps, dt, t_start, dx, rho, c_s, c_l, k_s, k_l, latent, T_f, bc_kind, bc_a, bc_b
):
    """Advance E in place by n_steps explicit steps of size dt.

    bc_kind 1 uses h = bc_a / sqrt(t) and T_inf = bc_b; bc_kind 2 uses
    q = bc_a / sqrt(t). Both are evaluated at the half-step time.
    """
    n = E.shape[0]
    T = np.empty(n)
    k = np.empty(n)
    face = np.empty(n - 1)
    for step in range(n_steps):
        t_half = t_start + (step + 0.5) * dt
        _node_state(E, rho, c_s, c_l, k_s, k_l, latent, T_f, T, k)
        for i in range(n - 1):
            face[i] = 0.5 * (k[i] + k[i + 1]) * (T[i + 1] - T[i]) / dx
        for i in range(1, n - 1):
            E[i] += dt / dx * (face[i] - face[i - 1])
        if bc_kind == 1:
            loss = bc_a / math.sqrt(t_half) * (T[0] - bc_b)
            E[0] += 2.0 * dt / dx * (face[0] - loss)
        elif bc_kind == 2:
            E[0] += 2.0 * dt / dx * (face[0] - bc_a / math.sqrt(t_half))


def enthalpy_from_temperature(T: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    """Volumetric enthalpy of fully solid (T < T_f) or liquid (T >= T_f) nodes."""
    m = spec.material
    T = np.asarray(T, dtype=float)
    solid = m.rho * m.c_s * (T - m.T_f)
    liquid = m.rho * m.latent_heat + m.rho * m.c_l * (T - m.T_f)
    return np.where(T < m.T_f, solid, liquid)


def liquid_fraction(E: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    m = spec.material
    return np.clip(np.asarray(E) / (m.rho * m.latent_heat), 0.0, 1.0)


def front_from_enthalpy(E: np.ndarray, dx: float, spec: ProblemSpec) -> float:
    """Solid thickness dx (0.5 (1 - f_0) + sum_{i=1}^{N-1} (1 - f_i))."""
    solid = 1.0 - liquid_fraction(E, spec)
    return dx * (0.5 * solid[0] + float(np.sum(solid[1:-1])))


def domain_length(sol: SimilaritySolution, t1: float) -> float:
    """max(6 s(t1), s(t1) + 12 sqrt(alpha_l t1))."""
    s1 = front_position(sol, t1)
    return max(6.0 * s1, s1 + 12.0 * math.sqrt(sol.spec.material.alpha_l * t1))


def seed_enthalpy(sol: SimilaritySolution, t0: float, cells: int, x_max: float) -> np.ndarray:
    """Enthalpy of the similarity solution at t0 on the node grid.

    The node whose control volume contains s(t0) gets the liquid fraction of
    that volume, so front_from_enthalpy reproduces s(t0) exactly.
    """
    spec = sol.spec
    m = spec.material
    dx = x_max / cells
    x = np.linspace(0.0, x_max, cells + 1)
    s0 = front_position(sol, t0)
    T = np.array(
        [solid_field(sol, xn, t0) if xn < s0 else liquid_field(sol, xn, t0) for xn in x]
    )
    E = enthalpy_from_temperature(T, spec)
    E[-1] = enthalpy_from_temperature(np.array([spec.T_i]), spec)[0]

    lo = np.maximum(x - 0.5 * dx, 0.0)
    hi = x + 0.5 * dx
    owner = np.nonzero((lo <= s0) & (s0 < hi))[0]
    if owner.size:
        i = int(owner[0])
        if not (i == 0 and isinstance(spec.bc, Dirichlet)) and i < cells:
            f = (hi[i] - s0) / (hi[i] - lo[i])
            E[i] = m.rho * m.latent_heat * f
    if isinstance(spec.bc, Dirichlet):
        E[0] = m.rho * m.c_s * (spec.bc.T_0 - m.T_f)
    return E


def stable_dt(spec: ProblemSpec, dx: float, t0: float, dt_factor: float) -> float:
    """Explicit step dt_factor dx^2 / alpha_max, checked against the face half cell.

    alpha_max = max(k_s, k_l) / (rho min(c_s, c_l)) bounds every node including
    mixed-phase faces.

    Raises:
        StabilityError: If dt_factor > 0.5 or the face node limit is exceeded
    """
    if not 0.0 < dt_factor <= 0.5:
        raise StabilityError(f"dt_factor = {dt_factor} exceeds the explicit limit 0.5")
    m = spec.material
    k_max = max(m.k_s, m.k_l)
    capacity = m.rho * min(m.c_s, m.c_l)
    alpha_max = k_max / capacity
    dt = dt_factor * dx * dx / alpha_max
    if isinstance(spec.bc, Convective):
        h_max = spec.bc.h_0 / math.sqrt(t0)
        limit = capacity * dx * dx / (2.0 * (k_max + h_max * dx))
        if dt > limit:
            raise StabilityError(
                f"time step {dt:.3e} s exceeds the convective face limit {limit:.3e} s"
            )
    return dt


@dataclass
class EnthalpyResult:
    """Front path of an enthalpy march."""

    times: np.ndarray
    front_numeric: np.ndarray
    front_exact: np.ndarray
    max_rel_error: float
    cells: int
    dx: float
    dt: float
    steps: int
    x_max: float
    t0: float
    t1: float
    elapsed_s: float

    def error_table(self) -> List[Dict[str, float]]:
        """Rows (t, s_numeric, s_exact, rel_error) of the recorded path."""
        rel = np.abs(self.front_numeric - self.front_exact) / self.front_exact
        return [
            {"t": float(t), "s_numeric": float(a), "s_exact": float(b), "rel_error": float(e)}
            for t, a, b, e in zip(self.times, self.front_numeric, self.front_exact, rel)
        ]

    def summary(self) -> Dict[str, Any]:
        return {
            "cells": self.cells,
            "dx": self.dx,
            "dt": self.dt,
            "steps": self.steps,
            "x_max": self.x_max,
            "t0": self.t0,
            "t1": self.t1,
            "max_rel_error": self.max_rel_error,
        }


def enthalpy_march(
    sol: SimilaritySolution,
    t0: float = 100.0,
    t1: float = 400.0,
    cells: int = 2000,
    dt_factor: float = DEFAULT_DT_FACTOR,
) -> EnthalpyResult:
    """March from t0 to t1 and compare the front with the similarity solution.

    The error is the largest |s_numeric - s_exact| / s_exact over recorded
    times in [2 t0, t1].

    Raises:
        RegimeError: If ``sol`` has no front
        InputError: On t0 <= 0, t1 < 2 t0 or fewer than 4 cells
        StabilityError: If the explicit step would be unstable
    """
    if not sol.is_two_phase:
        raise RegimeError("the enthalpy march needs a solidifying problem")
    if not (math.isfinite(t0) and t0 > 0.0):
        raise InputError(f"t0 must be positive, got {t0!r}")
    if not (math.isfinite(t1) and t1 >= 2.0 * t0):
        raise InputError(f"t1 must be at least 2 t0, got t0 = {t0!r}, t1 = {t1!r}")
    if cells < 4:
        raise InputError(f"the march needs at least 4 cells, got {cells}")

    spec = sol.spec
    m = spec.material
    x_max = domain_length(sol, t1)
    dx = x_max / cells
    dt_target = stable_dt(spec, dx, t0, dt_factor)
    steps = max(1, math.ceil((t1 - t0) / dt_target))
    dt = (t1 - t0) / steps

    if isinstance(spec.bc, Dirichlet):
        bc_kind, bc_a, bc_b = BC_DIRICHLET, 0.0, 0.0
    elif isinstance(spec.bc, Convective):
        bc_kind, bc_a, bc_b = BC_CONVECTIVE, spec.bc.h_0, spec.bc.T_inf
    else:
        bc_kind, bc_a, bc_b = BC_FLUX, spec.bc.q_0, 0.0

    E = seed_enthalpy(sol, t0, cells, x_max)
    logger.info(
        f"Enthalpy march: {cells} cells, dx = {dx:.3e} m, dt = {dt:.3e} s, {steps} steps"
    )

    n_records = min(MAX_RECORDS, steps)
    bounds = np.linspace(0, steps, n_records + 1).round().astype(int)
    times, fronts = [t0], [front_from_enthalpy(E, dx, spec)]
    started = time.perf_counter()
    for first, last in zip(bounds[:-1], bounds[1:]):
        _march(
            E,
            int(last - first),
            dt,
            t0 + first * dt,
            dx,
            m.rho,
            m.c_s,
            m.c_l,
            m.k_s,
            m.k_l,
            m.latent_heat,
            m.T_f,
            bc_kind,
            bc_a,
            bc_b,
        )
        times.append(t0 + last * dt)
        fronts.append(front_from_enthalpy(E, dx, spec))
    elapsed = time.perf_counter() - started

    times_arr = np.array(times)
    numeric = np.array(fronts)
    exact = np.array([front_position(sol, t) for t in times_arr])
    window = times_arr >= 2.0 * t0 * (1.0 - 1e-12)
    max_rel_error = float(np.max(np.abs(numeric[window] - exact[window]) / exact[window]))
    logger.info(f"Enthalpy march done in {elapsed:.2f} s: max front error {max_rel_error:.3e}")
    return EnthalpyResult(
        times=times_arr,
        front_numeric=numeric,
        front_exact=exact,
        max_rel_error=max_rel_error,
        cells=cells,
        dx=dx,
        dt=dt,
        steps=steps,
        x_max=x_max,
        t0=t0,
        t1=t1,
        elapsed_s=elapsed,
    )
