"""
Gauge flow, closed-form transformations, pullbacks and the family comparison.
"""

import numpy as np
import pytest

from walkerverify.catalog import EXAMPLE2_BOX, EXAMPLE4_BOX, get
from walkerverify.commands import run_gauge_demo
from walkerverify.config import IntegratorConfig
from walkerverify.errors import FlowIntegrationError, PreconditionError
from walkerverify.exprcore import ZERO, parse
from walkerverify.gauge import (
    ClosedFormTransform,
    closed_form_from_vshift,
    compare_flow_with_closed_form,
    family_isometry_test,
    flow_transform_for,
    integrate_flow,
    pullback_batch,
    transform_points,
    vshift_remove_H1,
)
from walkerverify.geometry import sample_metric_points
from walkerverify.walker import SPHERE_BOX, WalkerMetric, assemble

PAIRS = [
    ("example1-original", "example1", (0.8, 0.1)),
    ("example2-original", "example2", (0.8, 0.5)),
    ("example3-original", "example3", (1.0, 0.0)),
    ("example4-original", "example4", (1.2, 0.3)),
]


def metric_values(metric, env, params):
    return metric.jet(env, params, order=0).g


class TestClosedForm:
    """Structural checks of coordinate changes."""

    def test_identity(self):
        images = transform_points(ClosedFormTransform.identity(), [{"v": 1.0, "x": 2.0, "y": 3.0, "u": 4.0}])

        assert images == [{"v": 1.0, "x": 2.0, "y": 3.0, "u": 4.0}]

    def test_walker_shape_enforced(self):
        with pytest.raises(PreconditionError) as excinfo:
            ClosedFormTransform.from_text({"x": "x + v"})

        assert excinfo.value.error_code == "walker-shape"

    def test_u_must_be_shifted(self):
        with pytest.raises(PreconditionError):
            ClosedFormTransform.from_text({"u": "2*u"})

    def test_unknown_coordinate(self):
        with pytest.raises(PreconditionError):
            ClosedFormTransform.from_text({"t": "t"})

    def test_forward_transform_cannot_pull_back(self):
        entry = get("example1-original")
        forward = ClosedFormTransform.from_text({"y": "y - 2*Lambda*u*x^3"}, direction="forward")
        env = {c: np.array([0.5]) for c in ("v", "x", "y", "u")}

        with pytest.raises(PreconditionError):
            pullback_batch(assemble(entry.metric), forward, env, entry.params())


class TestPullback:
    """Each transformed example is the pullback of its original."""

    @pytest.mark.parametrize("original, transformed, _", PAIRS)
    def test_closed_form_pullback(self, original, transformed, _):
        source = get(original)
        target = get(transformed)
        params = target.params()
        metric = assemble(target.metric)
        env = sample_metric_points(metric, target.box, 30, 3, params)

        pulled = pullback_batch(assemble(source.metric), target.transform, env, params)
        expected = metric_values(metric, env, params)
        scale = 1.0 + np.abs(expected).max()

        assert np.abs(pulled - expected).max() / scale < 1e-7

    def test_flow_pullback_removes_A(self):
        """Pulling back by the integrated flow gives A = 0 within the integrator tolerance."""
        source = get("example1-original")
        params = source.params()
        flow = flow_transform_for(source.metric)
        env = {
            "v": np.array([0.2, -0.3]),
            "x": np.array([0.8, 1.1]),
            "y": np.array([0.1, -0.2]),
            "u": np.array([0.3, -0.2]),
        }

        pulled = pullback_batch(assemble(source.metric), flow, env, params)

        assert np.abs(pulled[:, 1:3, 3]).max() < 1e-8

    def test_vshift_removes_H1(self):
        w = WalkerMetric.build(
            [["1/Lambda", 0], [0, "sin(x)^2/Lambda"]], [0, 0], SPHERE_BOX, H0="cos(x)", H1="x*u", label="shifted"
        )
        shifted = vshift_remove_H1(w, 1.0)
        params = {"Lambda": 1.0}
        metric = assemble(shifted)
        env = sample_metric_points(metric, SPHERE_BOX, 20, 5, params)

        pulled = pullback_batch(assemble(w), closed_form_from_vshift(w, 1.0), env, params)

        assert shifted.H1 == ZERO
        assert np.abs(pulled - metric_values(metric, env, params)).max() < 1e-10

    def test_vshift_needs_nonzero_lambda(self):
        w = WalkerMetric.build([[1, 0], [0, 1]], [0, 0], SPHERE_BOX, H0="0", H1="x")

        with pytest.raises(PreconditionError):
            vshift_remove_H1(w, 0.0)


class TestFlow:
    """Numerical flow against the closed forms."""

    @pytest.mark.parametrize("original, transformed, start", PAIRS)
    def test_flow_matches_closed_form(self, original, transformed, start):
        source = get(original)
        flow = flow_transform_for(source.metric)
        comparison = compare_flow_with_closed_form(
            flow, get(transformed).transform, *start, np.linspace(-0.5, 0.5, 5), source.params()
        )

        assert comparison.max_deviation < 1e-8
        assert comparison.round_trip < 1e-8

    def test_flow_is_identity_at_base_time(self):
        source = get("example1-original")
        result = integrate_flow(flow_transform_for(source.metric), 0.8, 0.1, 0.0, source.params())

        assert result.x[0] == pytest.approx(0.8)
        assert result.y[0] == pytest.approx(0.1)
        np.testing.assert_allclose(result.jacobian[0], np.eye(2))

    def test_trivial_flow(self):
        entry = get("example1")
        flow = flow_transform_for(entry.metric)

        assert flow.is_trivial()

    def test_leaving_the_box(self):
        source = get("example1-original")
        flow = flow_transform_for(source.metric)

        with pytest.raises(FlowIntegrationError):
            integrate_flow(flow, 1.9, 0.9, 5.0, source.params())

    def test_gauge_demo_report(self):
        report = run_gauge_demo(get("example1-original"), start=(0.8, 0.1), steps=3)

        assert len(report.rows) == 3
        assert report.max_deviation < 1e-8
        assert report.extra["transformed"] == "example1"

    def test_gauge_demo_with_loose_integrator(self):
        """A coarse tolerance is visible in the deviation."""
        loose = IntegratorConfig(rtol=1e-3, atol=1e-3)
        report = run_gauge_demo(get("example2-original"), start=(0.8, 0.5), steps=3, integrator=loose)

        assert report.max_deviation < 1e-1

    def test_gauge_demo_without_partner(self):
        with pytest.raises(PreconditionError):
            run_gauge_demo(get("minkowski"))


class TestFamilyComparison:
    """Distinct h-families that agree at u = 0."""

    def test_example1_and_example2_distinct(self):
        result = family_isometry_test(
            get("example1").metric, get("example2").metric, 0.0, EXAMPLE2_BOX, n=50, params={"Lambda": -1.0}
        )

        assert not result.equal
        assert result.verdict == "distinct"
        assert result.witness is not None

    def test_example3_and_example4_distinct(self):
        result = family_isometry_test(
            get("example3").metric, get("example4").metric, 0.0, EXAMPLE4_BOX, n=50, params={"Lambda": 1.0}
        )

        assert result.verdict == "distinct"

    def test_same_family(self):
        metric = get("example1").metric
        result = family_isometry_test(metric, metric, 0.0, EXAMPLE2_BOX, n=50, params={"Lambda": -1.0})

        assert result.verdict == "equal-family"

    def test_alignment_required(self):
        scaled = ((parse("2/(-Lambda*x^2)"), ZERO), (ZERO, parse("2/(-Lambda*x^2)")))

        with pytest.raises(PreconditionError) as excinfo:
            family_isometry_test(
                get("example1").metric, scaled, 0.0, EXAMPLE2_BOX, n=20, params={"Lambda": -1.0}
            )

        assert excinfo.value.error_code == "alignment"
