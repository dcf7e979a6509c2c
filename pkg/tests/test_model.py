# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
import random
from fractions import Fraction

import pytest

from mldegree.errors import DegenerateModelError, PolynomialError, UnsupportedShapeError
from mldegree.model import (
    KE,
    EquilibriumConstant,
    RadicalRelation,
    Shape,
    build_model,
    build_parameterization,
    classify_ke,
    detect_shape,
    dump_model,
    fiber_degree,
    pullback,
    rational_root,
    real_root,
    reduce_radical,
    species_names,
    with_generic_ke,
)
from mldegree.poly import MPoly, VarContext, substitute
from mldegree.reaction import parse_reaction


def model(text: str, ke: str = "generic"):
    return build_model(parse_reaction(text), EquilibriumConstant.parse(ke))


class TestEquilibriumConstant:
    @pytest.mark.parametrize("text,value", [("4", Fraction(4)), ("-1", Fraction(-1)), ("1/2", Fraction(1, 2)), ("0.5", Fraction(1, 2))])
    def test_parse_rational(self, text, value):
        k = EquilibriumConstant.parse(text)
        assert k.value == value
        assert not k.is_generic
        assert k.positivity_flag == (value > 0)

    def test_parse_generic(self):
        k = EquilibriumConstant.parse(" Generic ")
        assert k.is_generic
        assert k.positivity_flag
        assert str(k) == "generic"

    @pytest.mark.parametrize("text", ["abc", "1/0", ""])
    def test_parse_invalid(self, text):
        with pytest.raises(PolynomialError, match=r"Invalid equilibrium constant"):
            EquilibriumConstant.parse(text)

    def test_str(self):
        assert str(EquilibriumConstant(Fraction(1, 2))) == "1/2"


class TestBuildModel:
    def test_generic(self):
        m = model("A + B <-> 2C")
        assert m.species_vars == ("x", "y", "z")
        assert m.ctx.names == ("x", "y", "z", KE)
        assert m.f_affine == MPoly.parse(m.ctx, "K_e*x*y - z^2")
        assert m.f_hom == m.f_affine
        assert m.constraint == MPoly.parse(m.ctx, "x + y + z - 1")
        assert m.label == "A + B <-> 2C, K_e=generic"
        assert not m.warnings

    def test_homogenized_by_linear_form(self):
        m = model("A <-> 2B", "3")
        assert m.ctx.names == ("x", "y")
        assert m.f_affine == MPoly.parse(m.ctx, "3*x - y^2")
        assert m.f_hom == MPoly.parse(m.ctx, "3*x^2 + 3*x*y - y^2")

    def test_nonphysical_warning(self):
        m = model("A <-> B", "-1")
        assert len(m.warnings) == 1
        assert "not positive" in m.warnings[0]

    def test_not_equilibrium(self):
        with pytest.raises(UnsupportedShapeError) as e:
            model("A -> B")
        assert e.value.supported

    def test_species_names(self):
        assert species_names(3) == ("x", "y", "z")
        assert species_names(6) == ("p0", "p1", "p2", "p3", "p4", "p5")
        assert model("A1 + A2 + A3 <-> B1 + B2 + B3").species_vars == species_names(6)


class TestShape:
    @pytest.mark.parametrize(
        "text,shape",
        [
            ("A <-> B", Shape.SINGLE),
            ("2A <-> 3B", Shape.SINGLE),
            ("A + B <-> 2C", Shape.BINARY),
            ("2A + 2B <-> C", Shape.BINARY),
            ("A + B <-> C + D", Shape.SEGRE),
            ("A1 + A2 + A3 <-> B1 + B2 + B3", Shape.CHAIN),
        ],
    )
    def test_detect(self, text, shape):
        assert detect_shape(parse_reaction(text)) == shape

    @pytest.mark.parametrize("text", ["A + B <-> C + 2D", "A + B + C <-> D", "A <-> B + C"])
    def test_unsupported(self, text):
        with pytest.raises(UnsupportedShapeError, match=r"Unsupported reaction shape"):
            detect_shape(parse_reaction(text))

    def test_override(self):
        mapping = build_parameterization(model("A1 + A2 <-> B1 + B2"), Shape.CHAIN)
        assert mapping.shape == Shape.CHAIN
        with pytest.raises(UnsupportedShapeError, match=r"does not have shape binary"):
            build_parameterization(model("A <-> B"), Shape.BINARY)


class TestParameterization:
    def test_binary_generic(self):
        mapping = build_parameterization(model("A + B <-> 2C"))
        assert mapping.param_vars == ("t0", "t1")
        assert mapping.exponent_matrix == ((2, 0, 1), (0, 2, 1))
        assert [str(image) for image in mapping.images()] == ["t0^2", "t1^2", "t0*t1*s"]
        assert str(mapping.relation) == "s^2 = K_e"
        assert fiber_degree(mapping) == 2
        assert pullback(mapping.model, mapping).is_zero()

    def test_binary_rational_root(self):
        mapping = build_parameterization(model("A + B <-> 2C", "4"))
        assert mapping.relation is None
        assert [str(image) for image in mapping.images()] == ["t0^2", "t1^2", "2*t0*t1"]
        assert mapping.evaluate({"t0": 1, "t1": 2}) == (1, 4, 4)

    def test_binary_irrational_root(self):
        mapping = build_parameterization(model("A + B <-> 2C", "2"))
        assert str(mapping.relation) == "s^2 = 2"
        assert mapping.constant_values()["s"] == pytest.approx(2**0.5)

    def test_cubic(self):
        mapping = build_parameterization(model("A + B <-> 3C", "1"))
        assert [str(image) for image in mapping.images()] == ["t0^3", "t1^3", "t0*t1"]
        assert fiber_degree(mapping) == 3

    def test_ke_zero(self):
        with pytest.raises(DegenerateModelError, match=r"K_e = 0"):
            build_parameterization(model("A + B <-> 2C", "0"))

    def test_single(self):
        mapping = build_parameterization(model("2A <-> 3B"))
        assert mapping.exponent_matrix == ((3, 2),)
        assert str(mapping.relation) == "s^3 = K_e"
        assert fiber_degree(mapping) == 1

    def test_single_common_factor(self):
        mapping = build_parameterization(model("2A <-> 2B"))
        assert mapping.exponent_matrix == ((1, 1),)
        assert pullback(mapping.model, mapping).is_zero()

    def test_chain_caveat(self):
        mapping = build_parameterization(model("A1 + A2 + A3 <-> B1 + B2 + B3"))
        assert mapping.shape == Shape.CHAIN
        assert fiber_degree(mapping) == 1
        assert "does not cover" in mapping.caveats[0]

    def test_segre_closed_form(self):
        mapping = build_parameterization(model("A + B <-> C + D"))
        assert mapping.is_closed_form
        assert not mapping.images()
        assert fiber_degree(mapping) == 1

    def test_generic_values_need_ke(self):
        mapping = build_parameterization(model("A + B <-> 2C"))
        with pytest.raises(PolynomialError, match=r"numeric K_e"):
            mapping.constant_values()
        assert mapping.constant_values(Fraction(9)) == {KE: 9, "s": pytest.approx(3.0)}


class TestRadicals:
    def test_reduce_radical(self):
        ctx = VarContext.build(["t0"], constants=["s", KE])
        relation = RadicalRelation("s", 2, MPoly.var(ctx, KE))
        assert reduce_radical(MPoly.parse(ctx, "s^3*t0 + s"), relation) == MPoly.parse(ctx, "t0*s*K_e + s")
        assert reduce_radical(MPoly.parse(ctx, "s^3"), None) == MPoly.parse(ctx, "s^3")

    def test_relation_str(self):
        ctx = VarContext.build(constants=["s"])
        assert str(RadicalRelation("s", 1, MPoly.constant(ctx, 2))) == "s = 2"

    @pytest.mark.parametrize(
        "value,d,expected",
        [
            (Fraction(8, 27), 3, Fraction(2, 3)),
            (Fraction(-8), 3, Fraction(-2)),
            (Fraction(-4), 2, None),
            (Fraction(2), 2, None),
            (Fraction(0), 2, Fraction(0)),
        ],
    )
    def test_rational_root(self, value, d, expected):
        assert rational_root(value, d) == expected

    def test_real_root(self):
        assert real_root(-8 + 0j, 3) == pytest.approx(-2.0)
        assert real_root(9 + 0j, 2) == pytest.approx(3.0)
        assert real_root(-4 + 0j, 2) == pytest.approx(2j)


class TestClassifyKe:
    def test_generic(self):
        assert classify_ke(model("A + B <-> 2C")).label == "generic"

    def test_generic_with_detected_drop(self):
        classification = classify_ke(model("A + B <-> 2C"), "eliminant degree drops")
        assert classification.degenerate == "eliminant degree drops"
        assert classification.label == "degenerate"

    def test_special_positive(self):
        assert classify_ke(model("A + B <-> 2C", "4")).label == "generic"

    def test_zero(self):
        classification = classify_ke(model("A + B <-> 2C", "0"))
        assert "K_e = 0" in classification.degenerate
        assert classification.label == "degenerate"

    def test_arrangement(self):
        classification = classify_ke(model("A <-> B", "-1"))
        assert "arrangement" in classification.degenerate
        assert classification.label == "degenerate+nonphysical_warning"

    def test_nonphysical(self):
        assert classify_ke(model("A + B <-> 2C", "-1")).label == "nonphysical_warning"


class TestHelpers:
    def test_with_generic_ke(self):
        m = model("A + B <-> 2C", "4")
        assert with_generic_ke(m).ke.is_generic
        generic = with_generic_ke(m)
        assert with_generic_ke(generic) is generic

    def test_dump_model(self):
        m = model("A + B <-> 2C")
        dump = dump_model(m, build_parameterization(m))
        assert "reaction: A + B <-> 2C" in dump
        assert "f_hom: x*y*K_e - z^2" in dump
        assert "shape: binary" in dump
        assert "image z: t0*t1*s" in dump
        assert "relation: s^2 = K_e" in dump

    def test_dump_warnings(self):
        assert "warning: K_e = -1 is not positive" in dump_model(model("A <-> B", "-1"))


class TestModelIdentities:
    @pytest.mark.parametrize(
        "text,ke",
        [
            ("A <-> B", "3"),
            ("2A <-> 3B", "generic"),
            ("A + B <-> 2C", "4"),
            ("A + B <-> 3C", "generic"),
            ("2A + 2B <-> C", "1"),
            ("N2 + 3H2 <-> 2NH3", "5"),
            ("A + B <-> C + D", "2"),
        ],
    )
    @pytest.mark.parametrize("seed", range(4))
    def test_homogenization_on_simplex(self, text, ke, seed):
        rng = random.Random(seed)
        m = model(text, ke)
        for _ in range(25):
            values = [Fraction(rng.randint(-20, 20), rng.randint(1, 20)) for _ in m.species_vars[1:]]
            bindings = dict(zip(m.species_vars, [1 - sum(values)] + values))
            assert substitute(m.f_hom, bindings) == substitute(m.f_affine, bindings)

    @pytest.mark.parametrize(
        "text",
        [
            "A <-> B",
            "2A <-> 3B",
            "2A <-> 2B",
            "A + B <-> 2C",
            "A + B <-> 3C",
            "A + 2B <-> C",
            "2A + 2B <-> C",
            "N2 + 3H2 <-> 2NH3",
            "A1 + A2 + A3 <-> B1 + B2 + B3",
        ],
    )
    @pytest.mark.parametrize("ke", ["1", "2", "3", "5"])
    def test_pullback_vanishes(self, text, ke):
        mapping = build_parameterization(model(text, ke))
        assert pullback(mapping.model, mapping).is_zero()
