"""
Killing residuals, brackets and algebra certificates.
"""

import numpy as np
import pytest

from walkerverify.catalog import get
from walkerverify.commands import run_killing
from walkerverify.errors import PreconditionError
from walkerverify.exprcore import ONE, ZERO
from walkerverify.killing import (
    VectorField,
    algebra_certificate,
    fit_in_span,
    jacobi_violation,
    killing_oneform_check,
    killing_residual,
    lie_bracket,
)
from walkerverify.walker import assemble

KILLING_ENTRIES = [
    "minkowski",
    "ppwave-harmonic",
    "plane-wave-rosen",
    "kerr-goldberg",
    "product-decomposable",
    "example1-original",
    "example1",
    "example2-original",
    "example2",
    "example3-original",
    "example3",
    "example4-original",
    "example4",
]


class TestResiduals:
    """Lie derivatives of the metric along listed fields."""

    @pytest.mark.parametrize("name", KILLING_ENTRIES)
    def test_listed_fields(self, name):
        entry = get(name)
        metric = assemble(entry.metric)
        for field in entry.killing:
            residual = killing_residual(metric, field, entry.box, n=30, params=entry.params())

            assert residual.passed(1e-9), (field.describe(), residual.value)

    def test_non_killing_field(self):
        entry = get("example1")
        residual = killing_residual(
            assemble(entry.metric), VectorField.from_text(["0", "1", "0", "0"]), n=30, params=entry.params()
        )

        assert not residual.passed()
        assert residual.witness is not None

    def test_zero_field(self):
        entry = get("example1")

        assert killing_residual(assemble(entry.metric), VectorField.zero(), n=5).value == 0.0

    def test_dilation_on_original(self):
        """(2v, x, y, -2u) is Killing for Example 1 in both charts."""
        entry = get("example1-original")
        field = VectorField.from_text(["2*v", "x", "y", "-2*u"])

        assert killing_residual(assemble(entry.metric), field, n=30, params=entry.params()).passed()


class TestBrackets:
    """Symbolic brackets."""

    def test_coordinate_fields_commute(self):
        bracket = lie_bracket(VectorField.from_text(["0", "0", "1", "0"]), VectorField.from_text(["0", "0", "0", "1"]))

        assert bracket.is_zero()

    def test_dilation_bracket(self):
        """[d_y, 2v d_v + x d_x + y d_y - 2u d_u] = d_y."""
        bracket = lie_bracket(
            VectorField.from_text(["0", "0", "1", "0"]), VectorField.from_text(["2*v", "x", "y", "-2*u"])
        )

        assert bracket.components[2] == ONE
        assert all(c == ZERO for i, c in enumerate(bracket.components) if i != 2)

    def test_different_charts(self):
        with pytest.raises(ValueError):
            lie_bracket(VectorField.from_text(["1", "0"], coords=("x", "y")), VectorField.zero())


class TestAlgebra:
    """Closure and structure constants."""

    def test_example1_structure_constants(self):
        entry = get("example1")
        certificate = algebra_certificate(
            assemble(entry.metric), entry.killing, entry.box, n=30, params=entry.params()
        )
        constants = np.array(certificate.structure_constants)

        assert certificate.passed
        assert not certificate.abelian
        np.testing.assert_allclose(constants[0, 1], [1.0, 0.0, 0.0], atol=1e-8)
        np.testing.assert_allclose(constants[0, 2], [0.0, 0.0, 0.0], atol=1e-8)
        np.testing.assert_allclose(constants[1, 2], [0.0, 0.0, 2.0], atol=1e-8)
        assert certificate.jacobi_residual < 1e-8

    def test_example3_abelian(self):
        entry = get("example3")
        certificate = algebra_certificate(
            assemble(entry.metric), entry.killing, entry.box, n=30, params=entry.params()
        )

        assert certificate.closed
        assert certificate.abelian

    def test_unclosed_list(self):
        """x^2 d_y is not a Killing field of flat space."""
        entry = get("minkowski")
        fields = [VectorField.from_text(["0", "1", "0", "0"]), VectorField.from_text(["0", "0", "x^2", "0"])]
        certificate = algebra_certificate(assemble(entry.metric), fields, entry.box, n=20, params=entry.params())

        assert not certificate.all_killing
        assert certificate.verdict == "not killing"

    def test_requires_fields(self):
        entry = get("minkowski")

        with pytest.raises(ValueError):
            algebra_certificate(assemble(entry.metric), [], n=5)

    def test_fit_in_span(self):
        basis = np.stack([np.ones((4, 2)), np.arange(8.0).reshape(4, 2)])
        target = 2 * basis[0] - 3 * basis[1]
        coefficients, misfit = fit_in_span(target, basis)

        np.testing.assert_allclose(coefficients, [2.0, -3.0], atol=1e-12)
        assert misfit < 1e-12

    def test_jacobi_of_so3(self):
        constants = np.zeros((3, 3, 3))
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            constants[i, j, k] = 1.0
            constants[j, i, k] = -1.0

        assert jacobi_violation(constants) < 1e-15

    def test_report(self):
        report = run_killing(get("example2"), n=20)

        assert report.passed
        assert len(report.residuals) == 2

    def test_report_without_fields(self):
        with pytest.raises(PreconditionError):
            run_killing(get("lewandowski-phi-1"), n=5)


class TestOneForms:
    """Killing one-forms of the backgrounds."""

    def test_backgrounds_have_killing_forms(self):
        entry = get("lewandowski-phi-z2")
        result = killing_oneform_check(entry.metric.surface(), entry.metric.A, entry.box, n=30, params=entry.params())

        assert result.passed

    def test_example_one_form_is_not_killing(self):
        entry = get("example1-original")
        result = killing_oneform_check(entry.metric.surface(), entry.metric.A, entry.box, n=30, params=entry.params())

        assert not result
