"""
Curvature endomorphism T, Petrov types, holonomy and the frame identities.
"""

import math

import numpy as np
import pytest

from walkerverify.catalog import get
from walkerverify.classify import (
    T_at,
    classify_grid,
    decide_types,
    grid_points,
    holonomy_verdict,
    identity_residuals,
    petrov_locus_root,
    petrov_type_at,
    weyl_identity_suite,
)
from walkerverify.commands import run_classify
from walkerverify.errors import GaugeViolationError, PreconditionError
from walkerverify.exprcore import Point, evaluate
from walkerverify.geometry import sample_metric_points
from walkerverify.models import HolonomyType, PetrovType
from walkerverify.walker import WalkerMetric, assemble


def at(entry, **coords):
    return Point(coords, entry.params())


class TestDeterminant:
    """det T against the closed forms stored on the entries."""

    @pytest.mark.parametrize(
        "name, coords",
        [
            ("example1", {"v": 0.3, "x": 0.9, "y": 0.2, "u": 0.1}),
            ("example1", {"v": -0.7, "x": 1.4, "y": -0.5, "u": -0.3}),
            ("example3", {"v": 0.2, "x": 1.2, "y": 0.4, "u": 0.2}),
            ("example4", {"v": 0.1, "x": 1.1, "y": 0.3, "u": 0.2}),
            ("example4", {"v": -0.4, "x": 2.0, "y": -0.6, "u": -0.1}),
        ],
    )
    def test_closed_form(self, name, coords):
        entry = get(name)
        point = at(entry, **coords)
        t = T_at(entry.metric, entry.lam, point)

        assert t.det == pytest.approx(evaluate(entry.det_T, point), rel=1e-6, abs=1e-9)

    def test_T_is_symmetric_and_trace_free(self):
        entry = get("example2")
        t = T_at(entry.metric, entry.lam, at(entry, v=0.2, x=0.7, y=0.5, u=0.1))

        assert t.symmetry_residual < 1e-8
        assert t.trace_residual < 1e-8
        assert t.frame_agreement < 1e-9

    def test_example2_det_negative(self):
        entry = get("example2")
        rows = classify_grid(entry.metric, entry.lam, entry.grid, entry.fixed, entry.params())

        assert all(r.det_T < 0 for r in rows)
        assert all(r.petrov_type == PetrovType.II for r in rows)


class TestPetrovTypes:
    """Type II and D regions."""

    def test_example1_type_II_on_v_zero(self):
        """det T = -9 Lambda^4 x^8 on v = 0, so the slice is type II."""
        entry = get("example1")
        rows = classify_grid(entry.metric, entry.lam, {"x": (0.5, 1.5, 5)}, {"v": 0.0, "y": 0.0, "u": 0.1})

        assert [r.petrov_type for r in rows] == [PetrovType.II] * 5
        for row in rows:
            assert row.det_T == pytest.approx(-9 * row.point["x"] ** 8, rel=1e-6)

    def test_example4_type_D_at_equator(self):
        entry = get("example4")
        decision = petrov_type_at(entry.metric, entry.lam, at(entry, v=0.0, x=math.pi / 2, y=0.0, u=0.0))

        assert decision.petrov_type == PetrovType.D

    def test_example4_type_D_locus(self):
        """T vanishes on y = 0, cos x = -2 v exp(Lambda u)."""
        entry = get("example4")
        v, u = -0.25, 0.1
        x = math.acos(-2 * v * math.exp(entry.lam * u))
        decision = petrov_type_at(entry.metric, entry.lam, at(entry, v=v, x=x, y=0.0, u=u))

        assert decision.petrov_type == PetrovType.D

    def test_example4_type_II_off_locus(self):
        entry = get("example4")
        decision = petrov_type_at(entry.metric, entry.lam, at(entry, v=0.3, x=1.2, y=0.4, u=0.0))

        assert decision.petrov_type == PetrovType.II
        assert not decision.near_degenerate

    def test_example3_locus_root(self):
        entry = get("example3")
        spec = entry.locus
        witness = petrov_locus_root(entry.metric, entry.lam, spec.base, spec.coordinate, spec.bracket)

        assert witness.value == pytest.approx(0.5855, abs=5e-3)
        assert witness.petrov_type == PetrovType.D
        assert witness.left_type == PetrovType.II
        assert witness.right_type == PetrovType.II

    def test_locus_root_needs_sign_change(self):
        """T of the harmonic pp-wave is constant, so no bracket can hold a root."""
        entry = get("ppwave-harmonic")

        with pytest.raises(PreconditionError) as excinfo:
            petrov_locus_root(entry.metric, entry.lam, {"v": 0.0, "y": 0.2, "u": 0.1}, "x", (-0.8, 0.8))

        assert excinfo.value.error_code == "bracket"

    def test_original_coordinates_rejected(self):
        entry = get("example1-original")

        with pytest.raises(GaugeViolationError):
            T_at(entry.metric, entry.lam, at(entry, v=0.0, x=1.0, y=0.0, u=0.0))


class TestDecision:
    """Type D threshold."""

    def test_small_T_without_background_is_type_II(self):
        """T = diag(1e-4, -1e-4) is small but nonzero."""
        is_d, near, threshold = decide_types(np.array([-1e-8]), np.array([2e-8]), 1e-8)

        assert not is_d[0]
        assert not near[0]
        assert threshold[0] == pytest.approx(2e-16)

    def test_vanishing_T_is_type_D(self):
        is_d, _, _ = decide_types(np.array([0.0, -1e-30]), np.array([0.0, 2e-30]), 1e-8, lam=-1.0)

        assert is_d.all()

    def test_threshold_follows_lambda(self):
        det = np.array([-5e-9])
        norm = np.array([1e-8])

        assert decide_types(det, norm, 1e-8, lam=1.0)[0][0]
        assert not decide_types(det, norm, 1e-8, lam=0.1)[0][0]

    def test_small_pp_wave_is_type_II(self):
        entry = get("ppwave-harmonic")
        w = WalkerMetric.build([[1, 0], [0, 1]], [0, 0], entry.metric.box, H="1e-5*(x^2 - y^2)", label="weak")
        decision = petrov_type_at(w, 0.0, Point({"v": 0.0, "x": 0.3, "y": 0.2, "u": 0.0}, {"Lambda": 0.0}))

        assert decision.petrov_type == PetrovType.II
        assert decision.det < 0
        assert abs(decision.det) < 1e-8


class TestHolonomy:
    """Sampled holonomy verdicts."""

    def test_product_is_decomposable(self):
        entry = get("product-decomposable")
        verdict = holonomy_verdict(entry.metric, entry.lam, n=30, params=entry.params())

        assert verdict.decomposable
        assert verdict.holonomy == HolonomyType.DECOMPOSABLE
        assert verdict.note

    @pytest.mark.parametrize("name", ["example1", "example2", "example3", "example4"])
    def test_examples_indecomposable(self, name):
        entry = get(name)
        verdict = holonomy_verdict(entry.metric, entry.lam, n=30, params=entry.params())

        assert verdict.holonomy == HolonomyType.INDECOMPOSABLE

    def test_classification_report(self):
        report = run_classify(get("example3"), n=20)

        assert report.holonomy == HolonomyType.INDECOMPOSABLE
        assert len(report.rows) == 15
        assert len(report.locus) == 1
        assert report.locus[0].petrov_type == PetrovType.D

    def test_classification_needs_grid(self):
        with pytest.raises(PreconditionError):
            run_classify(get("example4-original"), n=5)


class TestGrid:
    """Grid construction."""

    def test_last_coordinate_fastest(self):
        env = grid_points({"v": (0.0, 1.0, 2), "u": (0.0, 1.0, 3)}, {"x": 1.0, "y": 0.0})

        np.testing.assert_array_equal(env["u"], [0.0, 0.5, 1.0, 0.0, 0.5, 1.0])
        np.testing.assert_array_equal(env["v"], [0.0, 0.0, 0.0, 1.0, 1.0, 1.0])

    def test_missing_coordinate(self):
        with pytest.raises(PreconditionError):
            grid_points({"v": (0.0, 1.0, 2)}, {"x": 1.0})


class TestIdentities:
    """Curvature and Weyl identities in the null frame."""

    @pytest.mark.parametrize("name", ["example1", "example2", "example3", "example4", "product-decomposable"])
    def test_identity_suite(self, name):
        entry = get(name)
        params = entry.params()
        env = sample_metric_points(assemble(entry.metric), entry.box, 10, 9, params)
        report = identity_residuals(entry.metric, entry.lam, env, params)

        assert report.passed(1e-8), report.residuals

    def test_printed_weyl_coefficients_fail(self):
        entry = get("example1")
        report = weyl_identity_suite(entry.metric, entry.lam, at(entry, v=0.3, x=0.9, y=0.2, u=0.1))

        assert max(report.printed.values()) > 1e-3
