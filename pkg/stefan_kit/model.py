"""Problem data and the dimensionless groups derived from it.

Temperatures are in degrees Celsius; only differences enter the groups.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Callable, Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, model_validator

from .errors import InputError

SQRT_PI = math.sqrt(math.pi)


class MaterialProperties(BaseModel):
    """Thermophysical constants of one phase-change material (SI units)."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    rho: PositiveFloat = Field(description="Density, kg m^-3")
    c_s: PositiveFloat = Field(description="Specific heat of the solid, J kg^-1 K^-1")
    c_l: PositiveFloat = Field(description="Specific heat of the liquid, J kg^-1 K^-1")
    k_s: PositiveFloat = Field(description="Conductivity of the solid, W m^-1 K^-1")
    k_l: PositiveFloat = Field(description="Conductivity of the liquid, W m^-1 K^-1")
    latent_heat: PositiveFloat = Field(description="Latent heat of fusion, J kg^-1")
    T_f: float = Field(description="Phase-change temperature, degC")

    @property
    def alpha_s(self) -> float:
        """Solid diffusivity k_s / (rho c_s), m^2 s^-1."""
        return self.k_s / (self.rho * self.c_s)

    @property
    def alpha_l(self) -> float:
        """Liquid diffusivity k_l / (rho c_l), m^2 s^-1."""
        return self.k_l / (self.rho * self.c_l)


class Dirichlet(BaseModel):
    """Imposed face temperature T_0."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["dirichlet"] = "dirichlet"
    T_0: float


class Convective(BaseModel):
    """Face condition k_s T_x(0,t) = (h_0 / sqrt(t)) (T(0,t) - T_inf)."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["convective"] = "convective"
    h_0: PositiveFloat
    T_inf: float


class Flux(BaseModel):
    """Face condition k_s T_x(0,t) = q_0 / sqrt(t)."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["flux"] = "flux"
    q_0: PositiveFloat


BoundaryCondition = Annotated[Union[Dirichlet, Convective, Flux], Field(discriminator="kind")]


class ProblemSpec(BaseModel):
    """Material, initial liquid temperature and fixed-face condition."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    material: MaterialProperties
    T_i: float = Field(description="Initial liquid temperature, degC")
    bc: BoundaryCondition

    @model_validator(mode="after")
    def _check_temperatures(self) -> "ProblemSpec":
        T_f = self.material.T_f
        if self.T_i < T_f:
            raise ValueError(f"initial temperature T_i = {self.T_i} is below T_f = {T_f}")
        if isinstance(self.bc, Dirichlet) and self.bc.T_0 >= T_f:
            raise ValueError(
                f"no instantaneous phase change: T_0 = {self.bc.T_0} must be below T_f = {T_f}"
            )
        if isinstance(self.bc, Convective) and self.bc.T_inf >= T_f:
            raise ValueError(
                f"invalid cooling configuration: T_inf = {self.bc.T_inf} must be below T_f = {T_f}"
            )
        return self

    @property
    def kind(self) -> str:
        return self.bc.kind

    def with_bc(self, bc: Union[Dirichlet, Convective, Flux]) -> "ProblemSpec":
        """Same material and initial state under another face condition."""
        return ProblemSpec(material=self.material, T_i=self.T_i, bc=bc)


@dataclass(frozen=True)
class DimensionlessGroups:
    """Dimensionless parameters of the transcendental equations.

    Groups that do not apply to a boundary condition are zero.
    """

    b: float
    b1: float = 0.0
    b2: float = 0.0
    b3: float = 0.0
    b4: float = 0.0
    b_q: float = 0.0
    Ste: float = 0.0
    B: float = 0.0
    theta_inf: float = 0.0

    def as_dict(self) -> Dict[str, float]:
        return {
            "b": self.b,
            "b1": self.b1,
            "b2": self.b2,
            "b3": self.b3,
            "b4": self.b4,
            "b_q": self.b_q,
            "Ste": self.Ste,
            "B": self.B,
            "theta_inf": self.theta_inf,
        }


def b3_group(spec: ProblemSpec) -> float:
    m = spec.material
    return m.c_l * (spec.T_i - m.T_f) / (m.latent_heat * SQRT_PI)


def b1_group(m: MaterialProperties, h0: float, T_inf: float) -> float:
    return h0 * (m.T_f - T_inf) / (m.rho * m.latent_heat * math.sqrt(m.alpha_l))


def bq_group(m: MaterialProperties, q0: float) -> float:
    return q0 / (m.rho * m.latent_heat * math.sqrt(m.alpha_l))


def _common_groups(spec: ProblemSpec) -> Dict[str, float]:
    m = spec.material
    dT = spec.T_i - m.T_f
    return {
        "b": m.alpha_l / m.alpha_s,
        "b3": b3_group(spec),
        "Ste": m.c_s * dT / m.latent_heat,
    }


def groups_p1(spec: ProblemSpec) -> DimensionlessGroups:
    """Groups b, b3, b4 (and Ste) of the imposed-temperature problem.

    Raises:
        InputError: If the spec is not a Dirichlet spec or T_0 >= T_f
    """
    if not isinstance(spec.bc, Dirichlet):
        raise InputError(f"groups_p1 needs a Dirichlet spec, got {spec.kind}")
    m = spec.material
    if spec.bc.T_0 >= m.T_f:
        raise InputError("no instantaneous phase change: T_0 must be below T_f")
    b4 = m.k_s * (m.T_f - spec.bc.T_0) / (
        m.rho * m.latent_heat * math.sqrt(math.pi * m.alpha_s * m.alpha_l)
    )
    return DimensionlessGroups(b4=b4, **_common_groups(spec))


def groups_p2(spec: ProblemSpec) -> DimensionlessGroups:
    """Groups b, b1, b2, b3 and Ste, B, theta_inf of the convective problem.

    Raises:
        InputError: If the spec is not convective or T_inf >= T_f
    """
    if not isinstance(spec.bc, Convective):
        raise InputError(f"groups_p2 needs a convective spec, got {spec.kind}")
    m = spec.material
    h0, T_inf = spec.bc.h_0, spec.bc.T_inf
    if T_inf >= m.T_f:
        raise InputError("invalid cooling configuration: T_inf must be below T_f")
    dT = spec.T_i - m.T_f
    return DimensionlessGroups(
        b1=b1_group(m, h0, T_inf),
        b2=h0 / m.k_s * math.sqrt(math.pi * m.alpha_s),
        B=h0 * math.sqrt(m.alpha_s) / m.k_s,
        theta_inf=(m.T_f - T_inf) / dT if dT > 0.0 else math.inf,
        **_common_groups(spec),
    )


def groups_flux(spec: ProblemSpec) -> DimensionlessGroups:
    """Groups b, b3, b_q (and Ste) of the imposed-flux problem."""
    if not isinstance(spec.bc, Flux):
        raise InputError(f"groups_flux needs a flux spec, got {spec.kind}")
    m = spec.material
    b_q = bq_group(m, spec.bc.q_0)
    return DimensionlessGroups(b_q=b_q, **_common_groups(spec))


def snap_threshold(
    estimate: float, exceeds: Callable[[float], bool], max_steps: int = 64
) -> float:
    """Largest float near ``estimate`` for which the monotone predicate ``exceeds`` is False."""
    value = estimate
    for _ in range(max_steps):
        if not exceeds(value):
            break
        value = math.nextafter(value, 0.0)
    for _ in range(max_steps):
        up = math.nextafter(value, math.inf)
        if exceeds(up):
            break
        value = up
    return value


def critical_h0(spec: ProblemSpec) -> float:
    """Threshold coefficient k_l / sqrt(pi alpha_l) * (T_i - T_f) / (T_f - T_inf).

    A convective spec solidifies iff h_0 lies strictly above this value. The
    returned float is the largest h_0 with b1 <= b3, so the comparison agrees
    with the groups bit for bit.
    """
    if not isinstance(spec.bc, Convective):
        raise InputError(f"critical_h0 needs a convective spec, got {spec.kind}")
    m = spec.material
    T_inf = spec.bc.T_inf
    estimate = m.k_l / math.sqrt(math.pi * m.alpha_l) * (spec.T_i - m.T_f) / (m.T_f - T_inf)
    if not estimate > 0.0:
        return estimate
    b3 = b3_group(spec)
    return snap_threshold(estimate, lambda h0: b1_group(m, h0, T_inf) > b3)


class SpecFile(BaseModel):
    """Flat JSON layout of a spec file; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    rho: float
    c_s: float
    c_l: float
    k_s: float
    k_l: float
    latent_heat: float
    T_f: float
    T_i: float
    T_0: Optional[float] = None
    h_0: Optional[float] = None
    T_inf: Optional[float] = None
    q_0: Optional[float] = None

    @model_validator(mode="after")
    def _one_boundary_condition(self) -> "SpecFile":
        given = {
            "T_0": self.T_0 is not None,
            "h_0/T_inf": self.h_0 is not None or self.T_inf is not None,
            "q_0": self.q_0 is not None,
        }
        if sum(given.values()) != 1:
            raise ValueError("exactly one of {T_0} | {h_0, T_inf} | {q_0} must be given")
        if given["h_0/T_inf"] and (self.h_0 is None or self.T_inf is None):
            raise ValueError("a convective spec needs both h_0 and T_inf")
        return self

    def to_problem(self) -> ProblemSpec:
        material = MaterialProperties(
            rho=self.rho,
            c_s=self.c_s,
            c_l=self.c_l,
            k_s=self.k_s,
            k_l=self.k_l,
            latent_heat=self.latent_heat,
            T_f=self.T_f,
        )
        if self.T_0 is not None:
            bc: Union[Dirichlet, Convective, Flux] = Dirichlet(T_0=self.T_0)
        elif self.q_0 is not None:
            bc = Flux(q_0=self.q_0)
        else:
            bc = Convective(h_0=self.h_0, T_inf=self.T_inf)
        return ProblemSpec(material=material, T_i=self.T_i, bc=bc)


def parse_spec(text: str) -> ProblemSpec:
    """Parse a flat JSON spec document.

    Raises:
        InputError: On malformed JSON or data violating the ordering T_0 < T_f <= T_i
    """
    try:
        return SpecFile.model_validate_json(text).to_problem()
    except ValidationError as e:
        raise InputError(f"invalid spec: {e}") from e


def load_spec(path: Path) -> ProblemSpec:
    """Read and validate a spec file."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"spec file not found: {path}")
    return parse_spec(path.read_text(encoding="utf-8"))


def spec_to_flat(spec: ProblemSpec) -> Dict[str, Any]:
    """Inverse of parse_spec: the flat key layout of a spec file."""
    flat: Dict[str, Any] = spec.material.model_dump()
    flat["T_i"] = spec.T_i
    flat.update(spec.bc.model_dump(exclude={"kind"}))
    return flat


def dump_spec(spec: ProblemSpec) -> str:
    return json.dumps(spec_to_flat(spec), indent=2)
