"""Shared fixtures: the water/ice material, one spec per face condition and oracles."""

import math

import numpy as np
import pytest
from scipy import special as sc

from stefan_kit.model import (
    Convective,
    Dirichlet,
    Flux,
    MaterialProperties,
    ProblemSpec,
    critical_h0,
)


WATER = dict(
    rho=1000.0,
    c_s=2100.0,
    c_l=4200.0,
    k_s=2.1,
    k_l=0.6,
    latent_heat=334000.0,
    T_f=0.0,
)


@pytest.fixture
def water():
    """Water/ice constants in SI units."""
    return MaterialProperties(**WATER)


@pytest.fixture
def dirichlet_spec(water):
    """Liquid at 10 degC, face held at -20 degC."""
    return ProblemSpec(material=water, T_i=10.0, bc=Dirichlet(T_0=-20.0))


@pytest.fixture
def convective_spec(water):
    """Convective face with T_inf = -20 degC and h_0 ten times the threshold."""
    base = ProblemSpec(material=water, T_i=10.0, bc=Convective(h_0=1.0, T_inf=-20.0))
    return base.with_bc(Convective(h_0=10.0 * critical_h0(base), T_inf=-20.0))


@pytest.fixture
def subcritical_spec(convective_spec):
    """Convective face at half the threshold: no solid forms."""
    h0 = 0.5 * critical_h0(convective_spec)
    return convective_spec.with_bc(Convective(h_0=h0, T_inf=-20.0))


@pytest.fixture
def flux_spec(water):
    """Extracted flux coefficient of 2e4 W s^0.5 m^-2, about twice the threshold."""
    return ProblemSpec(material=water, T_i=10.0, bc=Flux(q_0=2.0e4))


def bisect_fixed_point(func, lo=1e-12, hi=1.0, iterations=300):
    """Plain bisection on func(x) - x, the reference for the hybrid solver."""
    while func(hi) - hi > 0.0:
        hi *= 2.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if func(mid) - mid > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oracle_G(x, b, b3, b4):
    y = math.sqrt(b) * x
    return b4 * math.exp(-y * y) / math.erf(y) - b3 / sc.erfcx(x)


def oracle_F(x, b, b1, b2, b3):
    y = math.sqrt(b) * x
    return b1 * math.exp(-y * y) / (1.0 + b2 * math.erf(y)) - b3 / sc.erfcx(x)


def taylor_erf(x, terms=80):
    """Maclaurin series of erf; accurate to ~1e-15 for |x| <= 2."""
    total = 0.0
    term = x
    for n in range(terms):
        total += term / (2 * n + 1)
        term *= -x * x / (n + 1)
    return 2.0 / math.sqrt(math.pi) * total


@pytest.fixture
def bisection():
    return bisect_fixed_point


@pytest.fixture
def oracles():
    return {"G": oracle_G, "F": oracle_F, "erf": taylor_erf}


def random_material(rng):
    return MaterialProperties(
        rho=float(rng.uniform(500.0, 3000.0)),
        c_s=float(rng.uniform(500.0, 5000.0)),
        c_l=float(rng.uniform(500.0, 5000.0)),
        k_s=float(rng.uniform(0.1, 50.0)),
        k_l=float(rng.uniform(0.1, 50.0)),
        latent_heat=float(rng.uniform(5e4, 5e5)),
        T_f=float(rng.uniform(-50.0, 50.0)),
    )


def random_dirichlet(rng):
    m = random_material(rng)
    T_i = m.T_f + float(rng.uniform(0.5, 50.0))
    T_0 = m.T_f - float(rng.uniform(0.5, 80.0))
    return ProblemSpec(material=m, T_i=T_i, bc=Dirichlet(T_0=T_0))


def random_convective(rng, factor_range=(1.5, 100.0)):
    """Convective spec with h_0 a log-uniform multiple of its threshold."""
    m = random_material(rng)
    T_i = m.T_f + float(rng.uniform(0.5, 50.0))
    T_inf = m.T_f - float(rng.uniform(0.5, 80.0))
    base = ProblemSpec(material=m, T_i=T_i, bc=Convective(h_0=1.0, T_inf=T_inf))
    lo, hi = factor_range
    factor = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    return base.with_bc(Convective(h_0=factor * critical_h0(base), T_inf=T_inf))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_specs():
    return {"dirichlet": random_dirichlet, "convective": random_convective}
