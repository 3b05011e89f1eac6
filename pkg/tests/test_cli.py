"""
Command line interface tests.
"""

import json

import pytest
from typer.testing import CliRunner

from walkerverify.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, app
from walkerverify.models import SCHEMA_VERSION

pytestmark = pytest.mark.integration

runner = CliRunner()

CSV_HEADER = "v,x,y,u,T11,T12,T21,T22,det_T,type,near_degenerate"


def run(*args):
    return runner.invoke(app, [str(a) for a in args])


class TestCheck:
    """``walker-verify check``"""

    def test_pass(self, temp_dir):
        out = temp_dir / "check.json"
        result = run("check", "example1", "-n", 20, "--out", out)

        assert result.exit_code == EXIT_PASS, result.output
        data = json.loads(out.read_text())
        assert data["schema"] == SCHEMA_VERSION
        assert data["metric"] == "example1"
        assert data["Lambda"] == -1.0
        assert data["passed"] is True
        assert data["samples"] == 20
        assert set(data["witness"]) == {"v", "x", "y", "u"}

    def test_fail(self, temp_dir):
        out = temp_dir / "check.json"
        result = run("check", "ppwave-nonharmonic", "-n", 20, "--out", out)

        assert result.exit_code == EXIT_FAIL
        assert json.loads(out.read_text())["passed"] is False

    def test_lambda_option(self, temp_dir):
        out = temp_dir / "check.json"
        result = run("check", "example1", "--lambda", -2, "-n", 20, "--out", out)

        assert result.exit_code == EXIT_PASS
        assert json.loads(out.read_text())["Lambda"] == -2.0

    def test_large_g_uu(self, temp_dir):
        """example2 reaches |g_uu| of order 1e3 inside its box."""
        out = temp_dir / "check.json"
        result = run("check", "example2", "--lambda", -1, "-n", 200, "--out", out)

        assert result.exit_code == EXIT_PASS, result.output
        assert json.loads(out.read_text())["passed"] is True

    def test_text_format(self):
        result = run("check", "example3", "-n", 20, "--format", "text")

        assert result.exit_code == EXIT_PASS
        assert "einstein" in result.output

    def test_unknown_metric(self):
        result = run("check", "example5")

        assert result.exit_code == EXIT_ERROR

    def test_missing_file(self, temp_dir):
        result = run("check", temp_dir / "absent.yaml")

        assert result.exit_code == EXIT_ERROR

    def test_config_file(self, temp_dir):
        config = temp_dir / "settings.yaml"
        config.write_text("sampling:\n  samples: 12\n")
        out = temp_dir / "check.json"
        result = run("check", "minkowski", "-c", config, "--out", out)

        assert result.exit_code == EXIT_PASS
        assert json.loads(out.read_text())["samples"] == 12


class TestClassify:
    """``walker-verify classify``"""

    def test_csv(self, temp_dir):
        out = temp_dir / "types.csv"
        result = run("classify", "example1", "-n", 10, "--out", out)

        assert result.exit_code == EXIT_PASS, result.output
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 15

    def test_grid_option(self, temp_dir):
        out = temp_dir / "types.csv"
        result = run(
            "classify", "example1", "--grid", "x=0.5:1.5:3", "--at", "v=0,y=0,u=0.1", "-n", 10, "--out", out
        )

        assert result.exit_code == EXIT_PASS
        rows = out.read_text().splitlines()[1:]
        assert len(rows) == 3
        assert all(row.split(",")[9] == "II" for row in rows)

    def test_json(self, temp_dir):
        out = temp_dir / "types.json"
        result = run("classify", "example3", "-n", 10, "--format", "json", "--out", out)

        assert result.exit_code == EXIT_PASS
        data = json.loads(out.read_text())
        assert data["holonomy"] == "sim(2)"
        assert data["locus"][0]["petrov_type"] == "D"

    def test_original_coordinates(self):
        result = run("classify", "example1-original", "--grid", "x=0.5:1.5:3", "--at", "v=0,y=0,u=0")

        assert result.exit_code == EXIT_ERROR


class TestKillingAndGauge:
    """``walker-verify killing`` and ``walker-verify gauge-demo``"""

    def test_killing(self, temp_dir):
        out = temp_dir / "killing.json"
        result = run("killing", "example1", "-n", 20, "--out", out)

        assert result.exit_code == EXIT_PASS
        data = json.loads(out.read_text())
        assert data["closed"] is True
        assert len(data["fields"]) == 3

    def test_killing_without_fields(self):
        assert run("killing", "lewandowski-phi-1").exit_code == EXIT_ERROR

    def test_gauge_demo(self, temp_dir):
        out = temp_dir / "gauge.json"
        result = run("gauge-demo", "example1-original", "--x0", 0.8, "--y0", 0.1, "--steps", 3, "--out", out)

        assert result.exit_code == EXIT_PASS, result.output
        data = json.loads(out.read_text())
        assert len(data["rows"]) == 3
        assert data["max_deviation"] < 1e-8

    def test_gauge_demo_without_partner(self):
        assert run("gauge-demo", "minkowski").exit_code == EXIT_ERROR


class TestCatalogCommands:
    """``walker-verify list`` and ``walker-verify export``"""

    def test_list(self):
        result = run("list")

        assert result.exit_code == EXIT_PASS
        assert "minkowski" in result.output

    def test_export_then_check(self, temp_dir):
        path = temp_dir / "example2.yaml"
        result = run("export", "example2", "--out", path)

        assert result.exit_code == EXIT_PASS
        assert path.exists()
        assert run("check", path, "-n", 10).exit_code == EXIT_PASS

    @pytest.mark.parametrize("name", ["example5", "not-a-metric"])
    def test_export_unknown(self, name, temp_dir):
        assert run("export", name, "--out", temp_dir / "x.yaml").exit_code == EXIT_ERROR
