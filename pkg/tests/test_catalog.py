"""
Catalog registry, self-test and YAML metric files.
"""

import pytest

from walkerverify.catalog import (
    CatalogRegistry,
    builtin_entries,
    export_entry,
    get,
    list_names,
    load_dsl,
    parse_dsl,
    self_test,
    write_dsl,
)
from walkerverify.errors import CatalogError, DSLFormatError

EXPECTED_NAMES = {
    "minkowski",
    "ppwave-harmonic",
    "ppwave-nonharmonic",
    "plane-wave-rosen",
    "kerr-goldberg",
    "product-decomposable",
    "example1",
    "example1-original",
    "example2",
    "example2-original",
    "example3",
    "example3-original",
    "example3-original-printed",
    "example4",
    "example4-original",
    "lewandowski-phi-1",
    "lewandowski-phi-z",
    "lewandowski-phi-z2",
}

PPWAVE_YAML = """
name: ppwave-file
params: {Lambda: 0.0}
h: [["1", "0"], ["0", "1"]]
A: ["0", "0"]
H: "x^2 - y^2"
killing:
  - ["1", "0", "0", "0"]
"""


class TestRegistry:
    """Lookup and consistency of the built-in entries."""

    def test_names(self):
        assert set(list_names()) == EXPECTED_NAMES
        assert list_names() == sorted(list_names())

    def test_unknown_name(self):
        with pytest.raises(CatalogError) as excinfo:
            get("example5")

        assert excinfo.value.error_code == "unknown-entry"
        assert "example1" in excinfo.value.details["available"]

    def test_duplicates_rejected(self):
        entries = builtin_entries()

        with pytest.raises(CatalogError) as excinfo:
            CatalogRegistry(entries + entries[:1])

        assert excinfo.value.error_code == "duplicate"

    def test_unknown_original_rejected(self):
        transformed = [e for e in builtin_entries() if e.name == "example1"]

        with pytest.raises(CatalogError) as excinfo:
            CatalogRegistry(transformed)

        assert excinfo.value.error_code == "unknown-original"

    def test_pairs(self):
        originals = {e.original for e in builtin_entries() if e.original}

        assert originals == {f"example{i}-original" for i in range(1, 5)}

    def test_params_override(self):
        entry = get("example1")

        assert entry.params() == {"Lambda": -1.0}
        assert entry.params(-2.0) == {"Lambda": -2.0}


class TestSelfTest:
    """Einstein residual against the declared expectation."""

    @pytest.mark.parametrize("name", sorted(EXPECTED_NAMES))
    def test_entry(self, name, test_config):
        result = self_test(get(name), n=test_config["samples"])

        assert result.passed, (name, result.residual)

    @pytest.mark.parametrize("name", ["ppwave-nonharmonic", "example3-original-printed"])
    def test_negative_controls_fail_einstein(self, name):
        result = self_test(get(name), n=20)

        assert not result.einstein
        assert result.residual >= result.tol

    def test_lambda_override(self):
        """Example 4 stays Einstein when Lambda is rescaled."""
        result = self_test(get("example4"), n=20, lam=2.0)

        assert result.passed


class TestDSL:
    """YAML metric definitions."""

    def test_parse(self):
        entry = parse_dsl(PPWAVE_YAML)

        assert entry.name == "ppwave-file"
        assert entry.lam == 0.0
        assert len(entry.killing) == 1
        assert self_test(entry, n=20).passed

    @pytest.mark.parametrize("name", ["example1", "example2", "example4-original", "kerr-goldberg"])
    def test_export_and_reload(self, name, temp_dir):
        entry = get(name)
        path = write_dsl(entry, temp_dir / f"{name}.yaml")
        reloaded = load_dsl(path)

        assert reloaded.name == entry.name
        assert reloaded.lam == entry.lam
        assert reloaded.metric.h == entry.metric.h
        assert reloaded.metric.A == entry.metric.A
        assert reloaded.metric.H == entry.metric.H
        assert len(reloaded.metric.box.constraints) == len(entry.metric.box.constraints)
        assert len(reloaded.killing) == len(entry.killing)
        assert self_test(reloaded, n=10).residual == self_test(entry, n=10).residual

    def test_export_text(self):
        text = export_entry(get("example1"))

        assert text.startswith("name: example1")
        assert "H0:" in text

    def test_malformed_yaml(self):
        with pytest.raises(DSLFormatError) as excinfo:
            parse_dsl("h: [[1, 0], [0, 1]\nA: [")

        assert excinfo.value.error_code == "yaml"

    def test_not_a_mapping(self):
        with pytest.raises(DSLFormatError) as excinfo:
            parse_dsl("- 1\n- 2\n")

        assert excinfo.value.error_code == "schema"

    @pytest.mark.parametrize(
        "replacement",
        [
            ('H: "x^2 - y^2"', ""),
            ('H: "x^2 - y^2"', 'H: "x^2"\nH0: "0"'),
            ('h: [["1", "0"], ["0", "1"]]', 'h: [["1", "0"]]'),
            ("name: ppwave-file", "name: ppwave-file\nchart: [x, y, u, v]"),
        ],
    )
    def test_schema_violations(self, replacement):
        with pytest.raises(DSLFormatError) as excinfo:
            parse_dsl(PPWAVE_YAML.replace(*replacement))

        assert excinfo.value.error_code == "schema"

    def test_bad_expression(self):
        with pytest.raises(DSLFormatError) as excinfo:
            parse_dsl(PPWAVE_YAML.replace('"x^2 - y^2"', '"x^2 - * y"'))

        assert excinfo.value.error_code == "expression"

    def test_unknown_variable(self):
        with pytest.raises(DSLFormatError):
            parse_dsl(PPWAVE_YAML.replace('"x^2 - y^2"', '"x^2 - z"'))

    def test_missing_file(self, temp_dir):
        with pytest.raises(DSLFormatError) as excinfo:
            load_dsl(temp_dir / "absent.yaml")

        assert excinfo.value.error_code == "missing-file"
