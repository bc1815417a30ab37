"""Tests for the command-line interface."""

import json

import pytest

from stefan_kit.cli import run
from stefan_kit.model import critical_h0
from stefan_kit.solve import solve

from .conftest import WATER


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    """Run every command in a scratch directory with its own log dir."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("STEFAN_KIT_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.delenv("STEFAN_KIT_TOL", raising=False)
    return tmp_path


def write_spec(path, **bc):
    path.write_text(json.dumps({**WATER, "T_i": 10.0, **bc}))
    return str(path)


@pytest.fixture
def dirichlet_file(workspace):
    return write_spec(workspace / "dirichlet.json", T_0=-20.0)


@pytest.fixture
def convective_file(workspace, convective_spec):
    return write_spec(workspace / "convective.json", h_0=convective_spec.bc.h_0, T_inf=-20.0)


@pytest.fixture
def subcritical_file(workspace, subcritical_spec):
    return write_spec(workspace / "sub.json", h_0=subcritical_spec.bc.h_0, T_inf=-20.0)


@pytest.fixture
def flux_file(workspace):
    return write_spec(workspace / "flux.json", q_0=2.0e4)


class TestSolveCommand:
    """Test `stefan-kit solve`."""

    def test_writes_summary_and_profile(self, workspace, dirichlet_file, dirichlet_spec):
        code = run(
            ["solve", "--spec", dirichlet_file, "--out", "out.json", "--times", "100,400",
             "--x-samples", "5"]
        )
        assert code == 0
        data = json.loads((workspace / "out.json").read_text())
        assert data["xi"] == solve(dirichlet_spec).front_coeff
        assert [entry["t"] for entry in data["front"]] == [100.0, 400.0]
        lines = (workspace / "out.csv").read_text().split("\n")
        assert lines[0] == "t,x,temperature,phase"
        assert len(lines) == 1 + 10 + 1

    def test_profile_path(self, workspace, flux_file):
        code = run(["solve", "--spec", flux_file, "--out", "s.json", "--profile", "p/prof.csv"])
        assert code == 0
        assert (workspace / "p" / "prof.csv").exists()

    def test_deterministic(self, workspace, convective_file):
        for name in ("a", "b"):
            assert run(["solve", "--spec", convective_file, "--out", f"{name}.json"]) == 0
        assert (workspace / "a.json").read_bytes() == (workspace / "b.json").read_bytes()
        assert (workspace / "a.csv").read_bytes() == (workspace / "b.csv").read_bytes()

    def test_pure_conduction(self, workspace, subcritical_file):
        assert run(["solve", "--spec", subcritical_file, "--out", "o.json"]) == 0
        data = json.loads((workspace / "o.json").read_text())
        assert data["regime"] == "pure_conduction"
        assert "front_coeff" not in data

    def test_require_two_phase(self, subcritical_file, capsys):
        code = run(["solve", "--spec", subcritical_file, "--out", "o.json", "--require-two-phase"])
        assert code == 3
        assert "pure-conduction" in capsys.readouterr().err

    def test_malformed_spec(self, workspace, capsys):
        (workspace / "bad.json").write_text("{not json")
        assert run(["solve", "--spec", "bad.json", "--out", "o.json"]) == 2
        assert capsys.readouterr().err.strip()

    def test_zero_latent_heat(self, workspace):
        spec = write_spec(workspace / "zero.json", T_0=-20.0)
        data = json.loads((workspace / "zero.json").read_text())
        data["latent_heat"] = 0.0
        (workspace / "zero.json").write_text(json.dumps(data))
        assert run(["solve", "--spec", spec, "--out", "o.json"]) == 2

    def test_missing_spec(self):
        assert run(["solve", "--spec", "nope.json", "--out", "o.json"]) == 2

    @pytest.mark.parametrize("times", ["1,-2", "", "a,b"])
    def test_bad_times(self, dirichlet_file, times):
        assert run(["solve", "--spec", dirichlet_file, "--out", "o.json", "--times", times]) == 2

    def test_too_few_samples(self, dirichlet_file):
        code = run(["solve", "--spec", dirichlet_file, "--out", "o.json", "--x-samples", "1"])
        assert code == 2

    def test_run_trail(self, workspace, dirichlet_file):
        assert run(["solve", "--spec", dirichlet_file, "--out", "o.json"]) == 0
        lines = (workspace / "logs" / "runs.jsonl").read_text().splitlines()
        event = json.loads(lines[-1])
        assert event["event"] == "solve"
        assert event["spec_kind"] == "dirichlet"


class TestEquivalenceCommand:
    """Test `stefan-kit equivalence`."""

    def test_dirichlet(self, workspace, dirichlet_file):
        code = run(["equivalence", "--spec", dirichlet_file, "--out", "eq.json", "--t-inf", "-40"])
        assert code == 0
        data = json.loads((workspace / "eq.json").read_text())
        assert data["roundtrip_gap"] <= 1e-10
        assert data["direction"] == "dirichlet_to_convective"
        assert data["lambda"] == pytest.approx(data["xi"], abs=1e-10)

    def test_convective(self, workspace, convective_file):
        assert run(["equivalence", "--spec", convective_file, "--out", "eq.json"]) == 0
        data = json.loads((workspace / "eq.json").read_text())
        assert data["direction"] == "convective_to_dirichlet"

    def test_dirichlet_needs_bulk(self, dirichlet_file, capsys):
        assert run(["equivalence", "--spec", dirichlet_file, "--out", "eq.json"]) == 2
        assert "--t-inf" in capsys.readouterr().err

    def test_bulk_above_face(self, dirichlet_file):
        code = run(["equivalence", "--spec", dirichlet_file, "--out", "e.json", "--t-inf", "-5"])
        assert code == 2

    def test_flux_rejected(self, flux_file):
        assert run(["equivalence", "--spec", flux_file, "--out", "eq.json"]) == 2

    def test_pure_conduction(self, subcritical_file):
        assert run(["equivalence", "--spec", subcritical_file, "--out", "eq.json"]) == 3


class TestSweepCommand:
    """Test `stefan-kit sweep`."""

    def test_relative_grid(self, workspace, convective_file):
        code = run(
            ["sweep", "--spec", convective_file, "--out", "sweep.csv", "--h0-grid",
             "1.001:1e6:20", "--relative"]
        )
        assert code == 0
        lines = (workspace / "sweep.csv").read_text().splitlines()
        assert lines[0] == "h0,lambda,T0_equiv"
        assert len(lines) == 21
        lams = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b > a for a, b in zip(lams, lams[1:]))

    def test_flagged_rows(self, workspace, convective_spec, convective_file):
        code = run(
            ["sweep", "--spec", convective_file, "--out", "sweep.csv", "--h0-grid",
             "0.5:2:4:lin", "--relative", "--workers", "2"]
        )
        assert code == 0
        rows = [line.split(",") for line in (workspace / "sweep.csv").read_text().splitlines()]
        assert rows[1][1:] == ["", ""]
        assert float(rows[1][0]) == pytest.approx(0.5 * critical_h0(convective_spec))
        assert rows[4][1] != ""

    def test_absolute_grid(self, workspace, convective_file):
        code = run(
            ["sweep", "--spec", convective_file, "--out", "s.csv", "--h0-grid", "1e3:1e5:3"]
        )
        assert code == 0
        rows = (workspace / "s.csv").read_text().splitlines()
        assert float(rows[1].split(",")[0]) == pytest.approx(1e3)

    @pytest.mark.parametrize("grid", ["1:2", "2:1:5", "1:2:5:cubic", "0:2:5"])
    def test_bad_grid(self, convective_file, grid):
        assert run(["sweep", "--spec", convective_file, "--out", "s.csv", "--h0-grid", grid]) == 2

    def test_needs_convective(self, dirichlet_file):
        code = run(["sweep", "--spec", dirichlet_file, "--out", "s.csv", "--h0-grid", "1:2:3"])
        assert code == 2


class TestArguments:
    """Test argument parsing."""

    def test_missing_command(self):
        assert run([]) == 2

    def test_missing_out(self, dirichlet_file):
        assert run(["solve", "--spec", dirichlet_file]) == 2

    def test_version(self, capsys):
        assert run(["--version"]) == 0
        assert "stefan-kit" in capsys.readouterr().out

    def test_bad_setting(self, dirichlet_file, monkeypatch):
        monkeypatch.setenv("STEFAN_KIT_TOL", "0")
        assert run(["solve", "--spec", dirichlet_file, "--out", "o.json"]) == 2

    def test_tol_flag(self, workspace, dirichlet_file):
        assert run(["solve", "--spec", dirichlet_file, "--out", "o.json", "--tol", "1e-10"]) == 0
        assert json.loads((workspace / "o.json").read_text())["residual"] <= 1e-10


class TestVerifyCommand:
    """Test `stefan-kit verify`."""

    def test_pure_conduction(self, subcritical_file):
        assert run(["verify", "--spec", subcritical_file, "--out", "v.json"]) == 3

    def test_bad_window(self, dirichlet_file):
        code = run(
            ["verify", "--spec", dirichlet_file, "--out", "v.json", "--t0", "100", "--t1", "120"]
        )
        assert code == 2

    @pytest.mark.slow
    def test_passes(self, workspace, dirichlet_file):
        assert run(["verify", "--spec", dirichlet_file, "--out", "v.json"]) == 0
        data = json.loads((workspace / "v.json").read_text())
        assert data["passed"] is True
        assert data["failures"] == []

    @pytest.mark.slow
    def test_failure_named(self, workspace, dirichlet_file, monkeypatch, capsys):
        monkeypatch.setenv("STEFAN_KIT_FRONT_TOL", "1e-12")
        code = run(["verify", "--spec", dirichlet_file, "--out", "v.json", "--cells", "200"])
        assert code == 1
        assert "enthalpy_front_error" in capsys.readouterr().err
        data = json.loads((workspace / "v.json").read_text())
        assert data["failures"] == ["enthalpy_front_error"]
