"""
Walker metric data, the reduced system and the constant-curvature forms.
"""

import pytest

from walkerverify.catalog import get
from walkerverify.errors import GaugeViolationError, PreconditionError, UnsupportedDegreeError
from walkerverify.exprcore import ONE, ZERO, DomainBox, evaluate, is_zero_sampled, parse, var
from walkerverify.geometry import max_residual
from walkerverify.killing import killing_oneform_check
from walkerverify.walker import (
    HYPERBOLIC_BOX,
    SPHERE_BOX,
    EinsteinAnsatz,
    PotentialFunction,
    WalkerMetric,
    assemble,
    assemble_from_potential,
    f_to_A,
    killing_family_check,
    lewandowski_A,
    lewandowski_metric,
    particular_H0,
    polynomial,
    reduced_system_residuals,
    sphere_H0_residual,
)

SPHERE_PARAMS = {"Lambda": 1.0}
HYPERBOLIC_PARAMS = {"Lambda": -1.0}


class TestWalkerMetric:
    """Construction and the Einstein ansatz."""

    def test_assembled_shape(self):
        w = WalkerMetric.build([[1, 0], [0, 1]], ["x", 0], HYPERBOLIC_BOX, H="x*y")
        rows = assemble(w).components

        assert rows[0][3] == ONE
        assert rows[1][3] == var("x")
        assert rows[0][0] == ZERO
        assert rows[3][3] == parse("x*y")

    def test_split_recovers_ansatz(self):
        ansatz = EinsteinAnsatz.split(parse("Lambda*v^2 + x*v + x^2"))

        assert ansatz is not None
        assert ansatz.H1 == var("x")
        assert ansatz.H0 == parse("x^2")

    def test_split_without_quadratic_term(self):
        assert EinsteinAnsatz.split(parse("v + x^2")) is None

    def test_split_rejects_nonlinear_v(self):
        assert EinsteinAnsatz.split(parse("Lambda*v^2 + v^3")) is None

    def test_build_from_H0(self):
        w = WalkerMetric.build([[1, 0], [0, 1]], [0, 0], HYPERBOLIC_BOX, H0="x^2", H1="y")

        assert w.H0 == parse("x^2")
        assert w.H1 == var("y")

    def test_h_must_not_depend_on_v(self):
        with pytest.raises(PreconditionError) as excinfo:
            WalkerMetric.build([["v", 0], [0, 1]], [0, 0], HYPERBOLIC_BOX, H0="0")

        assert "v" in str(excinfo.value)

    def test_A_must_not_depend_on_v(self):
        with pytest.raises(PreconditionError):
            WalkerMetric.build([[1, 0], [0, 1]], ["v*x", 0], HYPERBOLIC_BOX, H0="0")

    def test_H0_text_must_not_depend_on_v(self):
        with pytest.raises(PreconditionError):
            WalkerMetric.build([[1, 0], [0, 1]], [0, 0], HYPERBOLIC_BOX, H0="v*x")

    def test_H0_must_not_depend_on_v(self):
        with pytest.raises(PreconditionError):
            EinsteinAnsatz(parse("v*x"))

    def test_h_or_H_required(self):
        with pytest.raises(PreconditionError):
            WalkerMetric.build([[1, 0], [0, 1]], [0, 0], HYPERBOLIC_BOX)

    def test_asymmetric_h(self):
        with pytest.raises(PreconditionError):
            WalkerMetric.build([[1, "x"], [0, 1]], [0, 0], HYPERBOLIC_BOX, H0="0")

    def test_positive_definite(self):
        assert get("example1").metric.is_positive_definite({"Lambda": -1.0}, n=50)
        assert not get("example1").metric.is_positive_definite({"Lambda": 1.0}, n=50)


class TestPotentials:
    """The f and H0 equations on the two backgrounds."""

    @pytest.mark.parametrize(
        "name, params",
        [
            ("example1-original", HYPERBOLIC_PARAMS),
            ("example2-original", HYPERBOLIC_PARAMS),
            ("example3-original", SPHERE_PARAMS),
            ("example4-original", SPHERE_PARAMS),
        ],
    )
    def test_f_equation(self, name, params):
        entry = get(name)

        assert is_zero_sampled(entry.potential.f_residual(), entry.box, n=100, params=params).passed

    @pytest.mark.parametrize(
        "name, params",
        [
            ("example1-original", HYPERBOLIC_PARAMS),
            ("example2-original", HYPERBOLIC_PARAMS),
            ("example3-original", SPHERE_PARAMS),
        ],
    )
    def test_H0_equation(self, name, params):
        entry = get(name)
        residual = entry.potential.H0_residual(entry.metric.H0)

        assert is_zero_sampled(residual, entry.box, n=100, params=params).passed

    def test_harmonic_addition_to_H0(self):
        """ln(tan(x/2)) is harmonic on the sphere, so it may be added to H0."""
        entry = get("example4-original")
        residual = entry.potential.H0_residual(entry.metric.H0 - parse("Lambda*ln(tan(x/2))"))

        assert is_zero_sampled(residual, SPHERE_BOX, n=100, params=SPHERE_PARAMS).passed

    def test_printed_H0_of_example3_fails(self):
        entry = get("example3-original-printed")
        residual = entry.potential.H0_residual(entry.metric.H0)

        assert not is_zero_sampled(residual, SPHERE_BOX, n=100, params=SPHERE_PARAMS).passed

    def test_printed_gradient_sign_fails(self):
        """With + f_y^2 / sin^2 x the particular solution -Lambda f^2 no longer works."""
        f = parse("y*cos(x)")
        residual = sphere_H0_residual(f, particular_H0(f), printed=True)

        assert not is_zero_sampled(residual, SPHERE_BOX, n=100, params=SPHERE_PARAMS).passed

    def test_f_to_A_hyperbolic(self):
        a = f_to_A(PotentialFunction.from_text("x^2*y", "hyperbolic"))

        assert is_zero_sampled(a[0] - parse("-x^2"), HYPERBOLIC_BOX, n=20).passed
        assert is_zero_sampled(a[1] - parse("2*x*y"), HYPERBOLIC_BOX, n=20).passed

    def test_f_to_A_sphere(self):
        a = f_to_A(PotentialFunction.from_text("y*cos(x)", "sphere"))

        assert is_zero_sampled(a[0] + parse("cot(x)"), SPHERE_BOX, n=20).passed
        assert is_zero_sampled(a[1] + parse("y*sin(x)^2"), SPHERE_BOX, n=20).passed

    @pytest.mark.parametrize(
        "f, signature, lam",
        [("x^2", "hyperbolic", -1.0), ("y*cos(x)", "sphere", 1.0)],
    )
    def test_assembled_potential_is_einstein(self, f, signature, lam):
        w = assemble_from_potential(PotentialFunction.from_text(f, signature))

        assert max_residual(assemble(w), lam, n=30, params={"Lambda": lam}).value < 1e-7

    def test_unknown_signature(self):
        with pytest.raises(PreconditionError) as excinfo:
            PotentialFunction.from_text("x", "torus")

        assert excinfo.value.error_code == "signature"


class TestKillingFamilies:
    """Potentials whose one-form is or is not a Killing form."""

    @pytest.mark.parametrize("f, signature", [("1/x", "hyperbolic"), ("cos(x)", "sphere")])
    def test_killing_forms(self, f, signature):
        assert killing_family_check(PotentialFunction.from_text(f, signature), n=50)

    @pytest.mark.parametrize(
        "f, signature",
        [("x^2", "hyperbolic"), ("x^2*y", "hyperbolic"), ("y*cos(x)", "sphere")],
    )
    def test_new_examples_are_not_killing_forms(self, f, signature):
        assert not killing_family_check(PotentialFunction.from_text(f, signature), n=50)


class TestReducedSystem:
    """Residuals in the gauge A = 0, H1 = 0."""

    @pytest.mark.parametrize("name", ["example1", "example2", "example3", "example4"])
    def test_examples_satisfy_reduced_system(self, name):
        entry = get(name)
        result = reduced_system_residuals(entry.metric, entry.lam, n=30, params=entry.params())

        assert result.passed(1e-7), result.as_dict()

    def test_trace_free_violation_detected(self):
        box = DomainBox.of(v=(-1.0, 1.0), x=(0.3, 2.0), y=(-1.0, 1.0), u=(0.1, 0.5))
        w = WalkerMetric.build(
            [["(1 + u^2)/(-Lambda*x^2)", 0], [0, "1/(-Lambda*x^2)"]], [0, 0], box, H0="0"
        )
        result = reduced_system_residuals(w, -1.0, n=20)

        assert result.trace > 1e-3

    def test_requires_zero_A(self):
        entry = get("example1-original")

        with pytest.raises(GaugeViolationError):
            reduced_system_residuals(entry.metric, entry.lam, n=10)

    def test_requires_zero_H1(self):
        w = WalkerMetric.build([["1/Lambda", 0], [0, "sin(x)^2/Lambda"]], [0, 0], SPHERE_BOX, H0="0", H1="x")

        with pytest.raises(PreconditionError):
            reduced_system_residuals(w, 1.0, n=10)


class TestLewandowski:
    """Killing forms from holomorphic polynomials."""

    def test_polynomial(self):
        z2 = polynomial([0, 0, 1])
        env = {"x": 0.3, "y": 0.4}
        assert evaluate(z2.re, env) == pytest.approx(0.3 ** 2 - 0.4 ** 2)
        assert evaluate(z2.im, env) == pytest.approx(2 * 0.3 * 0.4)

    @pytest.mark.parametrize(
        "coefficients, lam",
        [([1.0], -1.0), ([0.0, 1.0], 1.0), ([0.0, 0.0, 1.0], 1.0)],
    )
    def test_einstein(self, coefficients, lam):
        w = lewandowski_metric(coefficients, lam)

        assert max_residual(assemble(w), lam, n=30, params={"Lambda": lam}).value < 1e-7

    def test_killing_form(self):
        w = lewandowski_metric([0.0, 1.0], 1.0)
        result = killing_oneform_check(w.surface(), w.A, w.box, n=30, params={"Lambda": 1.0})

        assert result.passed

    def test_degree_five_unsupported(self):
        with pytest.raises(UnsupportedDegreeError) as excinfo:
            lewandowski_A([0, 0, 0, 0, 0, 1], 1.0)

        assert excinfo.value.details["degree"] == 5

    def test_trailing_zeros_ignored(self):
        a = lewandowski_A([0.0, 1.0, 0.0, 0.0, 0.0, 0.0], 1.0)
        b = lewandowski_A([0.0, 1.0], 1.0)

        assert a == b

    def test_zero_lambda(self):
        with pytest.raises(PreconditionError):
            lewandowski_A([1.0], 0.0)

