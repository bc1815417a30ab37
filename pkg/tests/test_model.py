"""Tests for problem data, spec files and dimensionless groups."""

import json
import math

import pytest
from pydantic import ValidationError

from stefan_kit.errors import InputError
from stefan_kit.model import (
    Convective,
    Dirichlet,
    Flux,
    MaterialProperties,
    ProblemSpec,
    critical_h0,
    dump_spec,
    groups_flux,
    groups_p1,
    groups_p2,
    load_spec,
    parse_spec,
    spec_to_flat,
)

from .conftest import WATER, random_convective


class TestMaterial:
    """Test material properties."""

    def test_diffusivities(self, water):
        assert water.alpha_s == pytest.approx(2.1 / (1000.0 * 2100.0), rel=1e-15)
        assert water.alpha_l == pytest.approx(0.6 / (1000.0 * 4200.0), rel=1e-15)

    def test_non_positive_rejected(self):
        with pytest.raises(ValidationError):
            MaterialProperties(**{**WATER, "rho": 0.0})
        with pytest.raises(ValidationError):
            MaterialProperties(**{**WATER, "latent_heat": -1.0})

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            MaterialProperties(**{**WATER, "k_s": math.inf})


class TestProblemSpec:
    """Test spec invariants."""

    def test_face_not_below_melting(self, water):
        with pytest.raises(ValidationError, match="no instantaneous phase change"):
            ProblemSpec(material=water, T_i=10.0, bc=Dirichlet(T_0=0.0))

    def test_initial_below_melting(self, water):
        with pytest.raises(ValidationError, match="below T_f"):
            ProblemSpec(material=water, T_i=-1.0, bc=Dirichlet(T_0=-20.0))

    def test_bulk_not_below_melting(self, water):
        with pytest.raises(ValidationError, match="cooling configuration"):
            ProblemSpec(material=water, T_i=10.0, bc=Convective(h_0=100.0, T_inf=1.0))

    def test_with_bc_keeps_material(self, dirichlet_spec):
        other = dirichlet_spec.with_bc(Flux(q_0=1e4))
        assert other.material == dirichlet_spec.material
        assert other.T_i == dirichlet_spec.T_i
        assert other.kind == "flux"


class TestGroups:
    """Test the dimensionless groups against direct evaluation."""

    def test_groups_p1(self, dirichlet_spec):
        alpha_s = 2.1 / 2.1e6
        alpha_l = 0.6 / 4.2e6
        g = groups_p1(dirichlet_spec)
        assert g.b == pytest.approx(alpha_l / alpha_s, rel=1e-14)
        assert g.b3 == pytest.approx(4200.0 * 10.0 / (334000.0 * math.sqrt(math.pi)), rel=1e-14)
        expected_b4 = 2.1 * 20.0 / (1000.0 * 334000.0 * math.sqrt(math.pi * alpha_s * alpha_l))
        assert g.b4 == pytest.approx(expected_b4, rel=1e-14)
        assert g.Ste == pytest.approx(2100.0 * 10.0 / 334000.0, rel=1e-14)

    def test_groups_p2(self, water):
        spec = ProblemSpec(material=water, T_i=10.0, bc=Convective(h_0=1e4, T_inf=-20.0))
        alpha_s = 2.1 / 2.1e6
        alpha_l = 0.6 / 4.2e6
        g = groups_p2(spec)
        assert g.b1 == pytest.approx(1e4 * 20.0 / (3.34e8 * math.sqrt(alpha_l)), rel=1e-14)
        assert g.b2 == pytest.approx(1e4 / 2.1 * math.sqrt(math.pi * alpha_s), rel=1e-14)
        assert g.B == pytest.approx(1e4 * math.sqrt(alpha_s) / 2.1, rel=1e-14)
        assert g.theta_inf == pytest.approx(2.0, rel=1e-15)
        assert g.b4 == 0.0

    def test_groups_flux(self, flux_spec):
        g = groups_flux(flux_spec)
        alpha_l = 0.6 / 4.2e6
        assert g.b_q == pytest.approx(2e4 / (3.34e8 * math.sqrt(alpha_l)), rel=1e-14)

    def test_wrong_kind(self, dirichlet_spec, convective_spec):
        with pytest.raises(InputError):
            groups_p1(convective_spec)
        with pytest.raises(InputError):
            groups_p2(dirichlet_spec)
        with pytest.raises(InputError):
            groups_flux(dirichlet_spec)
        with pytest.raises(InputError):
            critical_h0(dirichlet_spec)

    def test_critical_h0(self, convective_spec):
        alpha_l = 0.6 / 4.2e6
        expected = 0.6 / math.sqrt(math.pi * alpha_l) * 10.0 / 20.0
        assert critical_h0(convective_spec) == pytest.approx(expected, rel=1e-14)

    def test_critical_h0_zero_without_superheat(self, water):
        spec = ProblemSpec(material=water, T_i=0.0, bc=Convective(h_0=1.0, T_inf=-20.0))
        assert critical_h0(spec) == 0.0

    def test_one_phase_and_symmetric_limits(self, water):
        spec = ProblemSpec(material=water, T_i=0.0, bc=Dirichlet(T_0=-20.0))
        assert groups_p1(spec).b3 == 0.0
        symmetric = water.model_copy(update={"c_l": 2100.0, "k_l": 2.1})
        spec = ProblemSpec(material=symmetric, T_i=10.0, bc=Dirichlet(T_0=-20.0))
        assert groups_p1(spec).b == 1.0

    def test_h0_doubling(self, convective_spec):
        h0 = convective_spec.bc.h_0
        g = groups_p2(convective_spec)
        g2 = groups_p2(convective_spec.with_bc(Convective(h_0=2.0 * h0, T_inf=-20.0)))
        assert (g2.b1, g2.b2, g2.B) == (2.0 * g.b1, 2.0 * g.b2, 2.0 * g.B)

    def test_b2_is_B_sqrt_pi(self, convective_spec):
        g = groups_p2(convective_spec)
        assert g.b2 == pytest.approx(g.B * math.sqrt(math.pi), rel=1e-14)

    def test_threshold_halves(self, convective_spec):
        colder = convective_spec.with_bc(Convective(h_0=1.0, T_inf=-40.0))
        assert critical_h0(colder) == pytest.approx(0.5 * critical_h0(convective_spec), rel=1e-14)

    def test_rescaling_invariance(self, convective_spec):
        """Scaling k_s, k_l, rho and h_0 together keeps every group."""
        m = convective_spec.material
        factor = 3.7
        scaled = ProblemSpec(
            material=m.model_copy(
                update={"k_s": factor * m.k_s, "k_l": factor * m.k_l, "rho": factor * m.rho}
            ),
            T_i=convective_spec.T_i,
            bc=Convective(h_0=factor * convective_spec.bc.h_0, T_inf=-20.0),
        )
        before = groups_p2(convective_spec).as_dict()
        after = groups_p2(scaled).as_dict()
        for key, value in before.items():
            assert after[key] == pytest.approx(value, rel=1e-12, abs=0.0), key


class TestRegimeThreshold:
    """b1 > b3 exactly when h_0 > critical_h0."""

    def test_random_specs(self, rng):
        for _ in range(200):
            spec = random_convective(rng, factor_range=(1e-3, 1e3))
            g = groups_p2(spec)
            assert (g.b1 > g.b3) == (spec.bc.h_0 > critical_h0(spec))

    def test_float_steps_around_threshold(self, rng):
        for _ in range(200):
            spec = random_convective(rng, factor_range=(1.0, 1.0))
            h_star = critical_h0(spec)
            assert spec.bc.h_0 == h_star
            h0 = h_star
            for _ in range(3):
                h0 = math.nextafter(h0, 0.0)
            for _ in range(7):
                g = groups_p2(spec.with_bc(Convective(h_0=h0, T_inf=spec.bc.T_inf)))
                assert (g.b1 > g.b3) == (h0 > h_star)
                h0 = math.nextafter(h0, math.inf)


class TestSpecFiles:
    """Test the flat JSON spec layout."""

    def test_parse_dirichlet(self):
        spec = parse_spec(json.dumps({**WATER, "T_i": 10.0, "T_0": -20.0}))
        assert isinstance(spec.bc, Dirichlet)
        assert spec.bc.T_0 == -20.0

    def test_parse_convective(self):
        spec = parse_spec(json.dumps({**WATER, "T_i": 10.0, "h_0": 500.0, "T_inf": -20.0}))
        assert isinstance(spec.bc, Convective)

    def test_round_trip(self, convective_spec):
        assert parse_spec(dump_spec(convective_spec)) == convective_spec
        assert spec_to_flat(convective_spec)["h_0"] == convective_spec.bc.h_0

    def test_two_conditions_rejected(self):
        text = json.dumps({**WATER, "T_i": 10.0, "T_0": -20.0, "q_0": 1e4})
        with pytest.raises(InputError, match="exactly one"):
            parse_spec(text)

    def test_incomplete_convective(self):
        with pytest.raises(InputError, match="both h_0 and T_inf"):
            parse_spec(json.dumps({**WATER, "T_i": 10.0, "h_0": 500.0}))

    def test_unknown_key(self):
        with pytest.raises(InputError):
            parse_spec(json.dumps({**WATER, "T_i": 10.0, "T_0": -20.0, "colour": "blue"}))

    def test_malformed_json(self):
        with pytest.raises(InputError):
            parse_spec("{not json")

    def test_zero_latent_heat(self):
        with pytest.raises(InputError):
            parse_spec(json.dumps({**WATER, "latent_heat": 0.0, "T_i": 10.0, "T_0": -20.0}))

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="not found"):
            load_spec(tmp_path / "missing.json")

    def test_load_file(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({**WATER, "T_i": 10.0, "q_0": 2e4}))
        assert load_spec(path).kind == "flux"
