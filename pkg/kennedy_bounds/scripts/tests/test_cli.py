"""Tests for the kennedy-bounds command-line interface."""

import json
import math

import pandas as pd
import pytest

from kennedy_bounds.scripts.cli import (
    COMMAND_HANDLERS,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_SCHEMA,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    build_parser,
)


class TestParser:
    """Test build_parser."""

    def test_every_command_is_registered(self):
        parser = build_parser()
        for command in ("kappa", "bound", "phimin", "sweep-ratio", "sweep-n",
                        "optimize", "verify", "receiver", "roc", "beamsplitter"):
            args = parser.parse_args([command] + _required(command))
            assert args.command == command

    def test_sweep_defaults(self):
        """Test that sweep defaults come from the sweeps preset."""
        args = build_parser().parse_args(["sweep-ratio"])
        assert args.n_total == 10
        assert args.grid == 33


def _required(command):
    return {
        "kappa": ["--alpha", "1", "--phi", "0.1"],
        "bound": ["--kappa", "0.5", "--p01", "0"],
        "roc": ["--kappa", "0.5"],
        "receiver": ["--alpha", "1", "--phi", "0.1"],
        "beamsplitter": ["--alpha", "1", "--gamma", "0.5", "--t-values", "0.9"],
    }.get(command, [])


class TestKappaCommand:
    """Test the kappa subcommand."""

    def test_identical_states(self, cli):
        """Test phi = 0 gives a single row with kappa = 1."""
        result = cli("kappa", "--alpha", "1", "--r", "0", "--phi", "0")
        assert result.code == EXIT_OK
        assert result.out == "alpha,r,phi,mode,kappa\n1,0,0,exact,1\n"

    def test_coherent_value(self, cli):
        result = cli("kappa", "--alpha", "1", "--phi", "0.1")
        assert result.frame()["kappa"][0] == pytest.approx(0.9900580812, abs=1e-10)

    def test_fock_mode_matches_closed_form(self, cli):
        exact = cli("kappa", "--alpha", "1", "--r", "0.5", "--phi", "0.3").frame()["kappa"][0]
        oracle = cli("kappa", "--alpha", "1", "--r", "0.5", "--phi", "0.3", "--mode", "fock").frame()["kappa"][0]
        assert oracle == pytest.approx(exact, abs=1e-10)

    def test_json_format(self, cli):
        result = cli("kappa", "--alpha", "1", "--phi", "0", "--format", "json")
        assert result.code == EXIT_OK
        assert json.loads(result.out) == [{"alpha": 1.0, "r": 0.0, "phi": 0.0, "mode": "exact", "kappa": 1.0}]

    def test_output_file(self, cli, tmp_path):
        """Test that --output writes the rows and leaves stdout empty."""
        path = tmp_path / "out" / "kappa.csv"
        result = cli("kappa", "--alpha", "1", "--phi", "0", "--output", str(path))
        assert result.code == EXIT_OK
        assert result.out == ""
        assert path.read_text() == "alpha,r,phi,mode,kappa\n1,0,0,exact,1\n"


class TestBoundCommands:
    """Test bound and roc."""

    def test_reference_value(self, cli):
        """Test kappa = 0.9, p01 = 0.01."""
        result = cli("bound", "--kappa", "0.9", "--p01", "0.01")
        assert result.code == EXIT_OK
        assert result.frame()["p11"][0] == pytest.approx(0.1676992, abs=1e-6)

    def test_kappa_out_of_range_is_usage_error(self, cli):
        result = cli("bound", "--kappa", "2", "--p01", "0.1")
        assert result.code == EXIT_USAGE
        assert "kappa" in result.err

    def test_roc_rows(self, cli):
        frame = cli("roc", "--kappa", "0.5", "--points", "11").frame()
        assert len(frame) == 11
        assert frame["p11"].iloc[-1] == 1.0
        assert frame["p11"].is_monotonic_increasing


class TestPhiminCommand:
    """Test the phimin subcommand."""

    def test_squeezed_vacuum_budget(self, cli):
        """Test n_total = 10, ratio = 1 gives sqrt(3/440)."""
        result = cli("phimin", "--n-total", "10", "--ratio", "1")
        assert result.code == EXIT_OK
        row = result.frame().iloc[0]
        assert row["phi_m"] == pytest.approx(0.0825723, abs=1e-7)
        assert row["method"] == "closed_form_squeezed_vacuum"

    def test_coherent_probe(self, cli):
        row = cli("phimin", "--alpha", str(math.sqrt(10.0))).frame().iloc[0]
        assert row["phi_m"] == pytest.approx(0.263277, abs=1e-6)
        assert row["ratio"] == 0.0

    def test_exact_mode(self, cli):
        row = cli("phimin", "--n-total", "10", "--ratio", "0", "--mode", "exact").frame().iloc[0]
        assert row["method"] == "numeric_root_exact"
        assert row["phi_m"] == pytest.approx(math.acos(1.0 - math.log(2.0) / 20.0), abs=1e-9)

    def test_both_parameterisations_rejected(self, cli):
        result = cli("phimin", "--alpha", "1", "--n-total", "10", "--ratio", "0.5")
        assert result.code == EXIT_USAGE
        assert "usage" in result.err

    def test_missing_probe_rejected(self, cli):
        assert cli("phimin").code == EXIT_USAGE

    def test_half_budget_rejected(self, cli):
        assert cli("phimin", "--n-total", "10").code == EXIT_USAGE

    def test_no_crossing_is_numeric_failure(self, cli):
        """Test a weak squeezed vacuum that never reaches P11 = 1/2."""
        result = cli("phimin", "--alpha", "0", "--r", "0.3", "--mode", "exact")
        assert result.code == EXIT_NUMERIC
        assert result.out == ""

    def test_unknown_flag(self, cli):
        assert cli("phimin", "--alpha", "1", "--bogus").code == EXIT_USAGE


class TestSweepCommands:
    """Test sweep-ratio, sweep-n and optimize."""

    def test_sweep_ratio_rows(self, cli):
        frame = cli("sweep-ratio", "--n-total", "10", "--grid", "5", "--mode", "approx").frame()
        assert list(frame["ratio"]) == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert frame["phi_m"].iloc[-1] == pytest.approx(0.0825723, abs=1e-7)

    def test_absent_points_are_empty_fields(self, cli):
        """Test that undetectable splits are written as empty fields, not dropped."""
        result = cli("sweep-ratio", "--n-total", "0.2", "--grid", "5")
        assert result.code == EXIT_OK
        lines = result.out.splitlines()
        assert lines[0] == "ratio,phi_m"
        assert len(lines) == 6
        assert lines[-1] == "1,"

    def test_sweep_n_rows(self, cli):
        frame = cli("sweep-n", "--n-min", "1", "--n-max", "100", "--points", "3",
                    "--ratios", "0,1", "--mode", "approx").frame()
        assert len(frame) == 6
        assert list(frame.columns) == ["n_total", "ratio", "phi_m"]
        assert list(frame["n_total"][:3]) == pytest.approx([1.0, 10.0, 100.0])

    def test_optimize_full_range_is_deterministic(self, cli, tmp_path):
        """Test 20 budgets over 1..1000: identical bytes on two runs and relative <= 1 at every row."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ("optimize", "--n-min", "1", "--n-max", "1000", "--points", "20")
        assert cli(*argv, "--output", str(first)).code == EXIT_OK
        assert cli(*argv, "--output", str(second)).code == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        frame = pd.read_csv(first)
        assert len(frame) == 20
        assert frame["relative"].notna().all()
        assert (frame["relative"] <= 1.0 + 1e-9).all()

    def test_optimize_without_squeezed_vacuum_reference(self, cli):
        """Test a budget where pure squeezing never crosses: empty phi_sv and relative."""
        result = cli("optimize", "--n-min", "0.3", "--n-max", "0.3", "--points", "1")
        assert result.code == EXIT_OK
        lines = result.out.splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("0.3,")
        assert lines[1].endswith(",,")

    def test_optimize_columns(self, cli):
        frame = cli("optimize", "--n-min", "10", "--n-max", "10", "--points", "1").frame()
        assert list(frame.columns) == ["n_total", "ratio_opt", "phi_opt", "phi_sv", "relative"]
        assert frame["relative"][0] <= 1.0


class TestReceiverCommands:
    """Test receiver and beamsplitter."""

    def test_ideal_receiver(self, cli):
        row = cli("receiver", "--alpha", "1", "--r", "0.3", "--phi", "0.1", "--dim", "40").frame().iloc[0]
        assert row["p01"] == pytest.approx(0.0, abs=1e-12)
        assert row["p11"] == pytest.approx(1.0 - row["kappa"], abs=1e-10)

    def test_dark_rate_needs_gate(self, cli):
        assert cli("receiver", "--alpha", "1", "--phi", "0.1", "--dark-rate", "50").code == EXIT_USAGE

    def test_saturated_gate_is_usage_error(self, cli):
        """Test a gate long enough that the dark-count probability rounds to one."""
        result = cli("receiver", "--alpha", "1", "--phi", "0.1", "--dark-rate", "50", "--gate", "1")
        assert result.code == EXIT_USAGE
        assert "saturates" in result.err
        assert "validation error" not in result.err

    def test_dark_counts_raise_false_alarms(self, cli):
        row = cli("receiver", "--alpha", "1", "--phi", "0.1", "--dim", "40",
                  "--dark-rate", "50", "--gate", "1e-6").frame().iloc[0]
        assert row["p_dark"] == pytest.approx(4.99988e-5, rel=1e-5)
        assert row["p01"] == pytest.approx(row["p_dark"], rel=1e-9)

    def test_beamsplitter_converges(self, cli):
        frame = cli("beamsplitter", "--alpha", "0.5", "--gamma", "0.5", "--t-values", "0.9,0.99").frame()
        assert list(frame["transmission"]) == [0.9, 0.99]
        assert frame["fidelity"].iloc[1] > frame["fidelity"].iloc[0]
        assert frame["purity"].tolist() == pytest.approx([1.0, 1.0], abs=1e-10)


class TestVerifyCommand:
    """Test the verify subcommand."""

    def test_default_grid_passes(self, cli):
        result = cli("verify", "--dim", "64")
        assert result.code == EXIT_OK
        frame = result.frame()
        assert frame["pass"].all()
        assert set(frame["test"]) == {"kappa_coherent", "kappa_squeezed", "kennedy_optimality"}
        assert "Oracle verification" in result.err

    def test_custom_grid(self, cli, small_grid_file):
        result = cli("verify", "--dim", "40", "--grid", str(small_grid_file))
        assert result.code == EXIT_OK
        assert len(result.frame()) == 12

    def test_impossible_tolerance_fails(self, cli, small_grid_file):
        result = cli("verify", "--dim", "40", "--grid", str(small_grid_file), "--tol", "1e-300")
        assert result.code == EXIT_VERIFY_FAILED
        assert not result.frame()["pass"].all()

    def test_truncation_too_small(self, cli):
        """Test that a basis too small for the grid is a numeric failure."""
        assert cli("verify", "--dim", "8").code == EXIT_NUMERIC


class TestSchemaFault:
    """Test that a row breaking its schema is reported as an internal error."""

    def test_exit_code(self, cli, monkeypatch):
        monkeypatch.setitem(COMMAND_HANDLERS, "roc", lambda cfg, args: [{"p01": 0.5}])
        result = cli("roc", "--kappa", "0.5")
        assert result.code == EXIT_SCHEMA
        assert result.code != EXIT_VERIFY_FAILED
        assert result.out == ""
        assert "internal error" in result.err
