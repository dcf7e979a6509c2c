# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
import random

import pytest

from mldegree.config import SolverConfig
from mldegree.curve import (
    NON_REDUCED_NOTE,
    ArrangementCount,
    Line,
    PlaneCurve,
    SmoothnessStatus,
    arrangement_count,
    count_critical_points_variety,
    distinct_projective_roots,
    ml_degree_curve,
    restrict_to_line,
    smoothness_check,
    variety_critical_system,
)
from mldegree.errors import DegenerateModelError, PolynomialError, TheoremInapplicableError, UnsupportedShapeError
from mldegree.model import EquilibriumConstant, build_model
from mldegree.poly import MPoly, VarContext
from mldegree.reaction import parse_reaction

XYZ = VarContext.build(["x", "y", "z"])

# Smooth conics with every coefficient nonzero, each meeting x = 0, y = 0, z = 0 and L = 0 in two
# points, none of them on two of those lines
DENSE_CONICS = [
    "x^2 + y^2 + z^2 - 3*x*y - 5*y*z - 7*x*z",
    "2*x^2 + 3*y^2 + 5*z^2 + x*y + 4*y*z + 6*x*z",
    "x^2 - 2*y^2 + 3*z^2 + 5*x*y - y*z + 2*x*z",
]


def curve(text: str, ke: str = "generic") -> PlaneCurve:
    return PlaneCurve.from_model(build_model(parse_reaction(text), EquilibriumConstant.parse(ke)))


class TestPlaneCurve:
    def test_from_model(self):
        c = curve("A + B <-> 2C", "4")
        assert c.names == ("x", "y", "z")
        assert c.degree == 2
        assert not c.is_generic

    def test_generic(self):
        c = curve("A + B <-> 2C")
        assert c.is_generic
        samples = c.samples(SolverConfig(seed=3, generic_samples=2))
        assert len(samples) == 2
        assert not any(sample.is_generic for sample in samples)
        assert samples == c.samples(SolverConfig(seed=3, generic_samples=2))

    def test_specific_samples(self):
        c = curve("A + B <-> 2C", "4")
        assert c.samples(SolverConfig()) == [c]

    def test_two_species(self):
        with pytest.raises(UnsupportedShapeError, match=r"exactly 3 species, got 2"):
            curve("A <-> B")

    def test_not_homogeneous(self):
        with pytest.raises(PolynomialError, match=r"not homogeneous"):
            PlaneCurve(MPoly.parse(XYZ, "x^2 + y"))

    def test_zero(self):
        with pytest.raises(PolynomialError, match=r"zero polynomial"):
            PlaneCurve(MPoly.zero(XYZ))

    def test_gradient(self):
        c = PlaneCurve(MPoly.parse(XYZ, "4*x*y - z^2"))
        assert c.gradient() == (MPoly.parse(XYZ, "4*y"), MPoly.parse(XYZ, "4*x"), MPoly.parse(XYZ, "-2*z"))


class TestArrangement:
    def test_restrict_to_line(self):
        c = PlaneCurve(MPoly.parse(XYZ, "4*x*y - z^2"))
        xy = VarContext.build(["x", "y"])
        assert restrict_to_line(c, Line.Z) == MPoly.parse(xy, "4*x*y")
        assert restrict_to_line(c, Line.L) == MPoly.parse(xy, "-x^2 + 2*x*y - y^2")

    def test_line_in_curve(self):
        c = PlaneCurve(MPoly.parse(XYZ, "x*y + x*z"))
        with pytest.raises(DegenerateModelError, match=r"reducible against H"):
            restrict_to_line(c, Line.X)

    def test_distinct_projective_roots(self):
        ctx = VarContext.build(["x", "y"])
        assert distinct_projective_roots(MPoly.parse(ctx, "x^2*y"), ("x", "y"), 3) == 2
        assert distinct_projective_roots(MPoly.parse(ctx, "x^2 - y^2"), ("x", "y"), 2) == 2
        assert distinct_projective_roots(MPoly.parse(ctx, "y^2"), ("x", "y"), 2) == 1

    def test_special_ke(self):
        result = arrangement_count(curve("A + B <-> 2C", "4"))
        assert result == ArrangementCount((1, 1, 2, 1), 2, 3)

    def test_generic_ke(self):
        result = arrangement_count(curve("A + B <-> 2C"))
        assert result.per_line_distinct == (1, 1, 2, 2)
        assert result.a == 4

    def test_skipped_line(self):
        result = arrangement_count(PlaneCurve(MPoly.parse(XYZ, "x*y + x*z")))
        assert result == ArrangementCount((0, 2, 2, 1), 1, 4, ("x",))

    def test_inconsistent(self):
        with pytest.raises(PolynomialError, match=r"Inconsistent"):
            ArrangementCount((1, 1, 1, 1), 0, 3)


class TestSmoothness:
    def test_smooth_conic(self):
        result = smoothness_check(curve("A + B <-> 2C", "4"))
        assert result.status == SmoothnessStatus.SMOOTH
        assert result.witness is None

    def test_non_reduced(self):
        result = smoothness_check(curve("A + B <-> 2C", "0"))
        assert result.status == SmoothnessStatus.SINGULAR
        assert result.non_reduced

    def test_singular_point(self):
        result = smoothness_check(curve("2A + 2B <-> C", "1"))
        assert result.status == SmoothnessStatus.SINGULAR
        assert not result.non_reduced
        # both points where L = 0 meets the double lines x = 0 and y = 0 are singular
        distances = [max(abs(p - q) for p, q in zip(result.witness, point)) for point in [(0, 1, -1), (1, 0, -1)]]
        assert min(distances) < 1e-6


class TestMlDegreeCurve:
    @pytest.mark.parametrize(
        "text,ke,expected",
        [
            ("A + B <-> 2C", "generic", 2),
            ("A + B <-> 2C", "4", 1),
            ("A + B <-> 3C", "1", 3),
        ],
    )
    def test_ml_degree(self, text, ke, expected):
        assert ml_degree_curve(curve(text, ke)).ml_degree == expected

    def test_report(self):
        report = ml_degree_curve(curve("A + B <-> 2C", "4"))
        assert report.degree == 2
        assert report.arrangement.a == 3
        assert report.smoothness == SmoothnessStatus.SMOOTH
        assert not report.caveats

    def test_generic_caveat(self):
        report = ml_degree_curve(curve("A + B <-> 2C"), SolverConfig(generic_samples=2))
        assert "2 rational specializations" in report.caveats[0]

    def test_non_reduced(self):
        report = ml_degree_curve(curve("A + B <-> 2C", "0"))
        assert report.ml_degree == 0
        assert report.arrangement is None
        assert report.caveats == (NON_REDUCED_NOTE,)

    def test_singular(self):
        with pytest.raises(TheoremInapplicableError, match=r"singular") as e:
            ml_degree_curve(curve("2A + 2B <-> C", "1"))
        assert e.value.witness is not None


class TestVarietyCount:
    def test_critical_system(self):
        c = PlaneCurve(MPoly.parse(XYZ, "4*x*y - z^2"))
        f, determinant = variety_critical_system(c, [1, 1, 1])
        assert f == c.f_hom
        assert determinant.is_homogeneous()
        assert determinant.total_degree() == 3

    def test_critical_system_counts(self):
        with pytest.raises(PolynomialError, match=r"Expected 3 counts"):
            variety_critical_system(curve("A + B <-> 2C", "4"), [1, 2])

    def test_hardy_weinberg(self):
        result = count_critical_points_variety(curve("A + B <-> 2C", "4"), [2, 3, 5])
        assert result.count == 1
        x, y, z = result.points[0].coordinates
        assert (x.real, y.real, z.real) == pytest.approx((0.2025, 0.3025, 0.495), abs=1e-9)

    def test_generic_rejected(self):
        with pytest.raises(PolynomialError, match=r"numeric K_e"):
            count_critical_points_variety(curve("A + B <-> 2C"), [1, 2, 3])

    def test_zero_count_rejected(self):
        with pytest.raises(PolynomialError, match=r"positive counts"):
            count_critical_points_variety(curve("A + B <-> 2C", "4"), [0, 2, 3])

    def test_non_reduced_rejected(self):
        with pytest.raises(DegenerateModelError, match=r"not reduced"):
            count_critical_points_variety(curve("A + B <-> 2C", "0"), [1, 2, 3])

    @pytest.mark.parametrize("ke", ["2", "5", "7"])
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_curve_formula(self, ke, seed):
        rng = random.Random(seed)
        u = [rng.randint(1, 50) for _ in range(3)]
        c = curve("A + B <-> 2C", ke)
        result = count_critical_points_variety(c, u)
        assert result.count == ml_degree_curve(c).ml_degree == 2
        assert result.count <= c.degree * (c.degree + 1)
        assert all(point.residual_max < 1e-9 for point in result.points)
        for point in result.points:
            assert sum(point.coordinates) == pytest.approx(1.0)

    @pytest.mark.parametrize("text", DENSE_CONICS)
    @pytest.mark.parametrize("seed", range(3))
    def test_bezout_ceiling(self, text, seed):
        rng = random.Random(seed)
        c = PlaneCurve(MPoly.parse(XYZ, text))
        result = count_critical_points_variety(c, [rng.randint(1, 50) for _ in range(3)])
        assert result.count <= c.degree * (c.degree + 1)
        assert all(point.residual_max < 1e-9 for point in result.points)


class TestDenseConics:
    @pytest.mark.parametrize("text", DENSE_CONICS)
    def test_ml_degree_six(self, text):
        report = ml_degree_curve(PlaneCurve(MPoly.parse(XYZ, text)))
        assert report.smoothness == SmoothnessStatus.SMOOTH
        assert report.arrangement.a == 8
        assert report.arrangement.per_line_distinct == (2, 2, 2, 2)
        assert report.ml_degree == 6
