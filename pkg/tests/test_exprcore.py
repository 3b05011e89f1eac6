"""
Expression parsing, differentiation, evaluation and sampling tests.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkerverify.errors import EvaluationDomainError, ExpressionSyntaxError, UnknownNameError
from walkerverify.exprcore import (
    Constraint,
    DomainBox,
    Point,
    differentiate,
    evaluate,
    free_names,
    is_zero_sampled,
    parse,
    sample_points,
    substitute,
    to_text,
    var,
)

BOX = DomainBox.of(x=(0.3, 2.0), y=(-1.0, 1.0))


class TestParser:
    """Grammar and error reporting."""

    def test_arithmetic(self):
        assert evaluate(parse("x^2 + 3*x"), {"x": 2.0}) == pytest.approx(10.0)

    def test_power_binds_tighter_than_minus(self):
        assert evaluate(parse("-x^2"), {"x": 3.0}) == pytest.approx(-9.0)

    def test_rational_literal(self):
        assert evaluate(parse("x^(2/3)"), {"x": 8.0}) == pytest.approx(4.0)

    def test_power_followed_by_division(self):
        """``x^2/4`` divides the square by four."""
        assert evaluate(parse("x^2/4"), {"x": 2.0}) == pytest.approx(1.0)

    def test_parameters(self):
        e = parse("Lambda*v^2")

        assert free_names(e) == ({"v"}, {"Lambda"})
        assert evaluate(e, Point({"v": 2.0}, {"Lambda": -1.0})) == pytest.approx(-4.0)

    def test_named_constant(self):
        assert evaluate(parse("cos(pi)"), {}) == pytest.approx(-1.0)

    def test_syntax_error_position(self):
        with pytest.raises(ExpressionSyntaxError) as excinfo:
            parse("x + * y")

        assert excinfo.value.position == 4
        assert excinfo.value.error_code == "syntax"

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ExpressionSyntaxError):
            parse("sin(x")

    def test_unknown_name(self):
        with pytest.raises(UnknownNameError):
            parse("x + z", names=("x", "y"))

    @pytest.mark.parametrize(
        "text",
        [
            "ln(tan(x/2))*cos(x) + 1",
            "(36*Lambda^2*u^2*x^4 + 1)/(-Lambda*x^2)",
            "x*(1 + 3*Lambda*u*x^3)^(-1/3)",
            "-Lambda^4/sin(x)^4*(v^2 + (ln(cot(x/2))*cos(x) - 1)^2)",
        ],
    )
    def test_print_parse_inverse(self, text):
        """Printing and parsing give back the same tree."""
        e = parse(text)

        assert parse(to_text(e)) == e


class TestDifferentiation:
    """Exact derivatives against known results and finite differences."""

    def test_product_rule(self):
        d = differentiate(parse("x*sin(x)"), "x")
        x = 0.7

        assert evaluate(d, {"x": x}) == pytest.approx(math.sin(x) + x * math.cos(x))

    def test_independent_variable(self):
        assert differentiate(parse("y^3"), "x") == parse("0")

    def test_log_tan_half(self):
        """d/dx ln(tan(x/2)) = 1/sin(x)."""
        d = differentiate(parse("ln(tan(x/2))"), "x")
        residual = d - parse("1/sin(x)")

        assert is_zero_sampled(residual, BOX, n=50).passed

    @pytest.mark.parametrize(
        "text",
        [
            "exp(-2*x)*cos(x)^2",
            "arccos(x/3)",
            "sqrt(x)*ln(x)",
            "x^(2/3)*y",
            "cot(x)/x",
        ],
    )
    def test_central_differences(self, text):
        """Richardson-extrapolated central differences agree within 1e-6."""
        e = parse(text)
        d = differentiate(e, "x")
        point = {"x": 0.9, "y": 0.4}

        def central(step):
            up = evaluate(e, {**point, "x": point["x"] + step})
            down = evaluate(e, {**point, "x": point["x"] - step})
            return (up - down) / (2 * step)

        h = 1e-3
        estimate = (4 * central(h / 2) - central(h)) / 3
        exact = evaluate(d, point)

        assert abs(estimate - exact) <= 1e-6 * (1 + abs(exact))

    def test_substitute(self):
        e = substitute(parse("x^2 + y"), {"x": var("y")})

        assert evaluate(e, {"y": 2.0}) == pytest.approx(6.0)


class TestEvaluation:
    """Domain handling of the evaluator."""

    def test_log_of_negative(self):
        with pytest.raises(EvaluationDomainError):
            evaluate(parse("ln(x)"), {"x": -1.0})

    def test_division_by_zero(self):
        with pytest.raises(EvaluationDomainError):
            evaluate(parse("1/x"), {"x": 0.0})

    def test_missing_parameter(self):
        with pytest.raises(UnknownNameError):
            evaluate(parse("Lambda*x"), {"x": 1.0})

    @given(
        a=st.floats(min_value=-10, max_value=10),
        b=st.floats(min_value=-10, max_value=10),
        x=st.floats(min_value=-5, max_value=5),
    )
    @settings(max_examples=50, deadline=None)
    def test_linear_function(self, a, b, x):
        e = parse(f"({a!r})*x + ({b!r})")

        assert evaluate(e, {"x": x}) == pytest.approx(a * x + b, abs=1e-9)


class TestSampling:
    """Seeded sampling and the sampled zero test."""

    def test_deterministic(self):
        first = sample_points(BOX, 20, seed=7)
        second = sample_points(BOX, 20, seed=7)

        np.testing.assert_array_equal(first["x"], second["x"])
        np.testing.assert_array_equal(first["y"], second["y"])

    def test_prefix_stable(self):
        """Point i does not depend on how many points are drawn."""
        small = sample_points(BOX, 5, seed=11)
        large = sample_points(BOX, 20, seed=11)

        np.testing.assert_array_equal(small["x"], large["x"][:5])

    def test_within_box(self):
        env = sample_points(BOX, 100, seed=1)

        assert np.all((env["x"] >= 0.3) & (env["x"] <= 2.0))
        assert np.all((env["y"] >= -1.0) & (env["y"] <= 1.0))

    def test_constraints_respected(self):
        box = BOX.with_constraints(Constraint.from_text("x - y", 0.5))
        env = sample_points(box, 100, seed=3)

        assert np.all(env["x"] - env["y"] > 0.5)

    def test_pythagorean_identity(self):
        result = is_zero_sampled(parse("sin(x)^2 + cos(x)^2 - 1"), BOX, n=100)

        assert result.passed
        assert result.max_residual < 1e-12

    def test_nonzero_expression(self):
        result = is_zero_sampled(parse("x - x^2"), BOX, n=100)

        assert not result.passed
        assert result.witness is not None

    def test_cancellation_inside_product(self):
        """Rounding in sqrt(1e20 + x^2) - 1e10 is measured against 1e10, not against the product."""
        e = parse("y*(sqrt(1e20 + x^2) - 1e10 - x^2/(sqrt(1e20 + x^2) + 1e10))")
        result = is_zero_sampled(e, BOX, n=100)

        assert result.passed
        assert result.max_residual < 1e-12

    def test_prefix_stable_with_rejections(self):
        box = BOX.with_constraints(Constraint.from_text("x - y", 0.5))
        small = sample_points(box, 5, seed=11)
        large = sample_points(box, 40, seed=11)

        np.testing.assert_array_equal(small["x"], large["x"][:5])
        np.testing.assert_array_equal(small["y"], large["y"][:5])

    def test_seeds_differ(self):
        first = sample_points(BOX, 10, seed=1)
        second = sample_points(BOX, 10, seed=2)

        assert not np.array_equal(first["x"], second["x"])
