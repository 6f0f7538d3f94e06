"""
Tests for the bdl command line.
"""

import json

import pytest

from apps.cli.main import main
from core.config import settings
from domain.enums import CheckSuiteName
from domain.models import CheckResult, SuiteSummary


@pytest.fixture(autouse=True)
def keep_root_logging(mocker):
    """Stop main() from rebinding root handlers to a captured stream."""
    return mocker.patch("apps.cli.main.configure_logging")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ============================================================================
# bound
# ============================================================================

@pytest.mark.integration
class TestBoundCommand:
    """Tests for the bound subcommand."""

    def test_report_schema(self, capsys, golden_squared):
        """Test the report keys, their order and the main values."""
        code, out, _ = run(capsys, "bound", "--n", "3", "--word", "1,-2", "--grid", "64", "--refine", "1")
        assert code == 0
        report = json.loads(out)
        assert list(report) == [
            "schema_version", "braid", "n", "bounds", "sharpness", "oracle", "zeta1", "timings_ms", "errors",
        ]
        assert list(report["bounds"]) == ["direction", "burau", "lkb"]
        assert report["bounds"]["direction"] == "lower_bound"
        assert report["bounds"]["burau"]["sup"] == pytest.approx(golden_squared, rel=1e-9)
        assert report["bounds"]["burau"]["argmax_t"] == {"re": -1.0, "im": 0.0}
        assert report["bounds"]["lkb"] is None
        assert report["oracle"]["class"] == "pseudo-Anosov"
        assert report["sharpness"]["at_minus1"] is True
        assert report["errors"] == {}

    def test_byte_identical_reruns(self, capsys):
        """Test two runs print the same bytes."""
        argv = ("bound", "--n", "3", "--word", "1,-2", "--grid", "32", "--lkb", "--zeta1", "--kmax", "5")
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_thread_count_does_not_change_output(self, capsys, mocker):
        """Test BDL_THREADS 1 and 4 give identical reports."""
        argv = ("bound", "--n", "3", "--word", "1,-2,1,-2,-1", "--grid", "96", "--lkb")
        mocker.patch.object(settings, "BDL_THREADS", 1)
        _, single, _ = run(capsys, *argv)
        mocker.patch.object(settings, "BDL_THREADS", 4)
        _, several, _ = run(capsys, *argv)
        assert single == several

    def test_timings_flag(self, capsys):
        """Test --timings fills timings_ms."""
        _, out, _ = run(capsys, "bound", "--n", "3", "--word", "1", "--grid", "16", "--timings")
        assert set(json.loads(out)["timings_ms"]) == {"burau", "oracle"}

    def test_parse_error_exit_code(self, capsys):
        """Test malformed words exit with 2."""
        code, out, err = run(capsys, "bound", "--n", "3", "--word", "1,x")
        assert code == 2
        assert out == ""
        assert err.startswith("error:")

    def test_range_error_exit_code(self, capsys):
        """Test out-of-range letters exit with 2."""
        code, _, _ = run(capsys, "bound", "--n", "3", "--word", "3")
        assert code == 2

    def test_invalid_grid(self, capsys):
        """Test grids below 8 exit with 2."""
        code, _, err = run(capsys, "bound", "--n", "3", "--word", "1", "--grid", "4")
        assert code == 2
        assert "invalid options" in err

    def test_resource_guard_exit_code(self, capsys, override_settings):
        """Test resource guards exit with 4."""
        override_settings(TORUS_POINT_CAP=10)
        code, _, _ = run(capsys, "bound", "--n", "3", "--word", "1", "--grid", "32")
        assert code == 4


# ============================================================================
# rep and growth
# ============================================================================

@pytest.mark.integration
class TestRepAndGrowthCommands:
    """Tests for matrix and growth output."""

    def test_rep_json(self, capsys):
        """Test the Burau matrix of sigma_1 in B_3 as JSON."""
        code, out, _ = run(capsys, "rep", "--kind", "burau", "--n", "3", "--word", "1")
        payload = json.loads(out)
        assert code == 0
        assert payload["dim"] == 2
        assert payload["variables"] == ["t"]
        assert payload["matrix"][0][0] == [{"exponents": [1], "coeff": "-1"}]
        assert payload["matrix"][1][0] == []

    def test_rep_csv(self, capsys):
        """Test CSV rows list every nonzero term."""
        code, out, _ = run(capsys, "rep", "--kind", "lkb", "--n", "3", "--word", "1", "--out", "csv")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "row,col,exponents,coeff"
        assert all(len(line.split(",")) == 4 for line in lines[1:])

    def test_rep_power(self, capsys):
        """Test --k represents a power of the braid."""
        _, out, _ = run(capsys, "rep", "--kind", "fox", "--n", "2", "--word", "1", "--k", "2")
        payload = json.loads(out)
        assert payload["power"] == 2
        assert payload["braid"] == "1,1"

    def test_growth_zeta1_csv(self, capsys):
        """Test the group-ring growth CSV has one row per k."""
        code, out, _ = run(capsys, "growth", "--n", "3", "--word", "1,-2", "--kmax", "5", "--out", "csv")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "k,trace_of_norms,norm_of_collected_trace,support_size"
        assert len(lines) == 6

    def test_growth_burau_json(self, capsys):
        """Test the Burau trace growth sequence for sigma_1 sigma_2^-1."""
        code, out, _ = run(capsys, "growth", "--kind", "burau", "--n", "3", "--word", "1,-2", "--kmax", "5")
        payload = json.loads(out)
        assert code == 0
        assert payload["norm_of_trace"] == [3, 7, 18, 47, 123]

    def test_growth_kmax_domain(self, capsys):
        """Test kmax below 1 exits with 2."""
        code, _, _ = run(capsys, "growth", "--n", "3", "--word", "1", "--kmax", "0")
        assert code == 2

    @pytest.mark.parametrize("kind", ["zeta1", "burau"])
    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_growth_needs_three_terms(self, capsys, kind, fmt):
        """Test kmax 2 is rejected the same way for every kind and format."""
        code, out, _ = run(
            capsys, "growth", "--kind", kind, "--n", "3", "--word", "1,-2", "--kmax", "2", "--out", fmt
        )
        assert code == 2
        assert out == ""

    def test_identity_braid_growth(self, capsys):
        """Test the identity braid has group-ring trace growth 1."""
        code, out, _ = run(capsys, "growth", "--n", "3", "--word", "", "--kmax", "6")
        payload = json.loads(out)
        assert code == 0
        assert payload["growth_estimate"]["estimate"] == 1.0


# ============================================================================
# check
# ============================================================================

@pytest.mark.integration
class TestCheckCommand:
    """Tests for the check subcommand."""

    def test_lemmas_pass(self, capsys):
        """Test a passing suite exits with 0."""
        code, out, _ = run(capsys, "check", "--suite", "lemmas")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_failure_exit_code(self, capsys, mocker):
        """Test a failing suite exits with 5."""
        failing = SuiteSummary(
            suite=CheckSuiteName.LEMMAS,
            passed=False,
            checks=[CheckResult(name="broken", passed=False, detail="nope")],
        )
        mocker.patch("apps.cli.main.check_suite", return_value=failing)
        code, out, _ = run(capsys, "check", "--suite", "lemmas")
        assert code == 5
        assert json.loads(out)["checks"][0]["name"] == "broken"


@pytest.mark.unit
class TestLoggingSetup:
    """Tests for log configuration from the command line."""

    def test_verbose_flag(self, capsys, keep_root_logging):
        """Test --verbose requests DEBUG logging."""
        run(capsys, "--verbose", "rep", "--n", "2", "--word", "1")
        keep_root_logging.assert_called_once_with(True)

    def test_quiet_by_default(self, capsys, keep_root_logging):
        """Test logging stays at the configured level without --verbose."""
        run(capsys, "rep", "--n", "2", "--word", "1")
        keep_root_logging.assert_called_once_with(False)
