# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
import random
from fractions import Fraction
from typing import List

import pytest
import sympy

from mldegree.errors import ContextMismatchError, NonExactDivisionError, PolynomialError
from mldegree.poly import (
    MPoly,
    PolyMatrix,
    Role,
    Symbol,
    VarContext,
    arith,
    degree_profile,
    determinant_fraction_free,
    eval_complex,
    exact_divide,
    from_univariate,
    partial_derivative,
    resultant,
    squarefree_factorization,
    squarefree_part,
    substitute,
    sylvester_matrix,
    univariate_coefficients,
    univariate_gcd,
)

XY = VarContext.build(["x", "y"])
X = VarContext.build(["x"])
Y = VarContext.build(["y"])


def p(text: str, ctx: VarContext = XY) -> MPoly:
    return MPoly.parse(ctx, text)


def to_sympy(poly: MPoly) -> sympy.Expr:
    return sympy.sympify(poly.to_text().replace("^", "**"))


def random_poly(rng: random.Random, degree_x: int, degree_y: int) -> MPoly:
    terms = {(i, j): rng.randint(-5, 5) for i in range(degree_x + 1) for j in range(degree_y + 1)}
    terms[(degree_x, 0)] = rng.choice([-3, -1, 1, 2])
    return MPoly(XY, terms)


def random_univariate(rng: random.Random, degree: int) -> MPoly:
    coefficients = [rng.randint(-5, 5) for _ in range(degree)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    return from_univariate(X, "x", coefficients)


def cofactor_determinant(rows: List[List[MPoly]]) -> MPoly:
    if len(rows) == 1:
        return rows[0][0]
    total = MPoly.zero(rows[0][0].ctx)
    for j, entry in enumerate(rows[0]):
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = entry * cofactor_determinant(minor)
        total = total - term if j % 2 else total + term
    return total


class TestVarContext:
    def test_build(self):
        ctx = VarContext.build(["x", "y"], lagrange="lambda", counts=["u0"], constants=["K_e"])
        assert ctx.names == ("x", "y", "lambda", "u0", "K_e")
        assert ctx.role("lambda") == Role.LAGRANGE
        assert ctx.names_with_role(Role.UNKNOWN) == ("x", "y")
        assert ctx.names_with_role(Role.CONSTANT) == ("K_e",)
        assert "u0" in ctx
        assert len(ctx) == 5

    def test_without(self):
        assert VarContext.build(["x", "y", "z"]).without(["y"]).names == ("x", "z")

    def test_duplicate_names(self):
        with pytest.raises(PolynomialError, match=r"must be distinct"):
            VarContext.build(["x", "x"])

    def test_two_lagrange_symbols(self):
        with pytest.raises(PolynomialError, match=r"At most one Lagrange"):
            VarContext([Symbol("a", Role.LAGRANGE), Symbol("b", Role.LAGRANGE)])

    def test_unknown_variable(self):
        with pytest.raises(PolynomialError, match=r"Unknown variable: w"):
            XY.index("w")


class TestMPoly:
    def test_parse_and_render(self):
        poly = p("1 - 3/2*y + x^2*y")
        assert poly.to_text() == "x^2*y - 3/2*y + 1"
        assert str(-poly) == "-x^2*y + 3/2*y - 1"
        assert p(poly.to_text()) == poly

    def test_render_zero(self):
        assert MPoly.zero(XY).to_text() == "0"

    def test_parse_errors(self):
        with pytest.raises(PolynomialError, match=r"Empty polynomial"):
            p("  ")
        with pytest.raises(PolynomialError, match=r"Unparseable factor"):
            p("x*(y)")
        with pytest.raises(PolynomialError, match=r"Unknown variable: w"):
            p("x + w")

    def test_arithmetic(self):
        assert p("x + y") * p("x - y") == p("x^2 - y^2")
        assert p("x + y") ** 2 == p("x^2 + 2*x*y + y^2")
        assert 2 - p("x") == p("2 - x")
        assert p("x") * Fraction(1, 2) == p("1/2*x")
        assert p("x") - p("x") == 0

    def test_negative_power(self):
        with pytest.raises(PolynomialError):
            _ = p("x") ** -1

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatchError):
            _ = MPoly.var(XY, "x") + MPoly.var(X, "x")

    def test_invalid_exponent(self):
        with pytest.raises(PolynomialError, match=r"does not match context"):
            MPoly(XY, {(1,): 1})
        with pytest.raises(PolynomialError, match=r"Negative exponent"):
            MPoly(XY, {(1, -1): 1})

    def test_degrees(self):
        poly = p("x^3*y + x*y^2")
        assert poly.total_degree() == 4
        assert poly.degree_in("y") == 2
        assert degree_profile(poly, "x") == (3, 1)
        assert poly.leading_term() == ((3, 1), Fraction(1))
        assert not poly.is_homogeneous()
        assert p("x^2 - 3*x*y").is_homogeneous()

    def test_zero_polynomial_errors(self):
        zero = MPoly.zero(XY)
        with pytest.raises(PolynomialError):
            zero.leading_term()
        with pytest.raises(PolynomialError):
            zero.total_degree()
        with pytest.raises(PolynomialError):
            degree_profile(zero, "x")

    def test_constant_value(self):
        assert p("7/3").constant_value() == Fraction(7, 3)
        assert MPoly.zero(XY).constant_value() == 0
        with pytest.raises(PolynomialError, match=r"not constant"):
            p("x").constant_value()

    def test_variables_and_context(self):
        poly = p("y^2 + 1")
        assert poly.variables() == ("y",)
        assert poly.in_context(Y) == p("y^2 + 1", Y)
        with pytest.raises(ContextMismatchError):
            p("x").in_context(Y)

    def test_coefficients_in(self):
        assert p("x^2*y + 3*y + x").coefficients_in("x") == {2: p("y"), 1: p("1"), 0: p("3*y")}


class TestOperations:
    def test_arith(self):
        a, b = p("x"), p("y")
        assert arith("add", a, b) == p("x + y")
        assert arith("sub", a, b) == p("x - y")
        assert arith("mul", a, b) == p("x*y")
        assert arith("neg", a) == p("-x")
        with pytest.raises(PolynomialError, match=r"needs two operands"):
            arith("add", a)
        with pytest.raises(PolynomialError, match=r"Unknown operation"):
            arith("div", a, b)
        with pytest.raises(ContextMismatchError):
            arith("add", a, MPoly.var(X, "x"))

    def test_partial_derivative(self):
        assert partial_derivative(p("x^3*y + 2*x + y"), "x") == p("3*x^2*y + 2")

    def test_substitute_polynomial(self):
        assert substitute(p("x^2 + y"), {"x": p("y + 1")}) == p("y^2 + 3*y + 1", Y)

    def test_substitute_rational(self):
        assert substitute(p("x*y"), {"x": Fraction(1, 2)}) == p("1/2*y", Y)

    def test_substitute_simultaneous(self):
        assert substitute(p("x - y"), {"x": p("y"), "y": p("x")}) == p("y - x")

    def test_eval_complex(self):
        assert eval_complex(p("x^2 + 1", X), {"x": 1j}) == 0
        assert eval_complex(p("x*y - 2"), {"x": 2, "y": 3}) == 4
        with pytest.raises(PolynomialError, match=r"Unbound variable"):
            eval_complex(p("x*y"), {"x": 1})

    def test_eval_complex_horner(self):
        value = eval_complex(p("x^5 + 5*x^4*y + 10*x^3*y^2 + 10*x^2*y^3 + 5*x*y^4 + y^5"), {"x": 0.5, "y": 0.25j})
        assert value == pytest.approx((0.5 + 0.25j) ** 5)
        assert eval_complex(p("3*x^2 - x + 7"), {"x": 2, "y": float("inf")}) == 17
        assert eval_complex(MPoly.zero(XY), {}) == 0

    def test_exact_divide(self):
        assert exact_divide(p("x^2 - y^2"), p("x - y")) == p("x + y")
        assert exact_divide(p("4*x"), p("2")) == p("2*x")

    def test_exact_divide_remainder(self):
        with pytest.raises(NonExactDivisionError):
            exact_divide(p("x^2 + 1"), p("x"))
        with pytest.raises(NonExactDivisionError, match=r"zero polynomial"):
            exact_divide(p("x"), MPoly.zero(XY))


class TestElimination:
    def test_determinant(self):
        m = PolyMatrix([[p("x"), p("y")], [p("1"), p("x")]])
        assert determinant_fraction_free(m) == p("x^2 - y")

    def test_determinant_needs_pivot(self):
        m = PolyMatrix([[p("0"), p("1"), p("0")], [p("1"), p("0"), p("0")], [p("0"), p("0"), p("x")]])
        assert determinant_fraction_free(m) == p("-x")

    def test_determinant_singular(self):
        m = PolyMatrix([[p("x"), p("y")], [p("2*x"), p("2*y")]])
        assert determinant_fraction_free(m).is_zero()

    def test_matrix_shape(self):
        with pytest.raises(PolynomialError, match=r"non-square"):
            determinant_fraction_free(PolyMatrix([[p("x"), p("y")]]))
        with pytest.raises(PolynomialError, match=r"different lengths"):
            PolyMatrix([[p("x"), p("y")], [p("1")]])
        with pytest.raises(ContextMismatchError):
            PolyMatrix([[p("x"), MPoly.var(X, "x")]])

    def test_sylvester_matrix(self):
        m = sylvester_matrix(p("x^2 - 2"), p("x - y"), "x")
        assert (m.rows, m.cols) == (3, 3)
        assert m[0, 2] == p("-2")
        assert m[1, 1] == p("-y")

    def test_sylvester_constants(self):
        with pytest.raises(PolynomialError, match=r"degree 0"):
            sylvester_matrix(p("y"), p("2"), "x")

    def test_resultant(self):
        assert resultant(p("x^2 - 2"), p("x - y"), "x") == p("y^2 - 2")

    @pytest.mark.parametrize("seed", range(10))
    def test_resultant_matches_sympy(self, seed):
        rng = random.Random(seed)
        f = random_poly(rng, rng.randint(1, 3), rng.randint(0, 2))
        g = random_poly(rng, rng.randint(1, 3), rng.randint(0, 2))
        expected = sympy.resultant(to_sympy(f), to_sympy(g), sympy.Symbol("x"))
        assert sympy.expand(to_sympy(resultant(f, g, "x")) - expected) == 0

    @pytest.mark.parametrize("seed", range(10))
    def test_determinant_matches_sympy(self, seed):
        rng = random.Random(seed)
        size = rng.randint(2, 4)
        entries = [[random_poly(rng, rng.randint(0, 1), rng.randint(0, 1)) for _ in range(size)] for _ in range(size)]
        expected = sympy.Matrix([[to_sympy(e) for e in row] for row in entries]).det()
        assert sympy.expand(to_sympy(determinant_fraction_free(PolyMatrix(entries))) - expected) == 0

    @pytest.mark.parametrize("seed", range(20))
    def test_resultant_vanishes_with_common_factor(self, seed):
        rng = random.Random(seed)
        for _ in range(10):
            f, g = random_univariate(rng, rng.randint(1, 4)), random_univariate(rng, rng.randint(1, 4))
            if rng.random() < 0.5:
                common = from_univariate(X, "x", [rng.randint(-3, 3), 1])
                f = common * random_univariate(rng, rng.randint(0, 3))
                g = common * random_univariate(rng, rng.randint(0, 3))
            shares_factor = univariate_gcd(f, g, "x").total_degree() > 0
            assert resultant(f, g, "x").is_zero() == shares_factor

    @pytest.mark.parametrize("seed", range(100))
    def test_determinant_matches_cofactors(self, seed):
        rng = random.Random(seed)
        size = rng.randint(2, 4)
        entries = [[random_poly(rng, rng.randint(0, 1), rng.randint(0, 1)) for _ in range(size)] for _ in range(size)]
        assert determinant_fraction_free(PolyMatrix(entries)) == cofactor_determinant(entries)

    @pytest.mark.parametrize("seed", range(5))
    def test_ring_laws(self, seed):
        rng = random.Random(seed)
        a, b, c = (random_poly(rng, 2, 2) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert exact_divide(a * b, b) == a
        assert p(a.to_text()) == a


class TestUnivariate:
    def test_coefficients(self):
        assert univariate_coefficients(p("3*x^2 - 1", X), "x") == [-1, 0, 3]
        assert univariate_coefficients(MPoly.zero(X), "x") == []
        with pytest.raises(PolynomialError, match=r"not univariate"):
            univariate_coefficients(p("x*y"), "x")

    def test_from_univariate(self):
        assert from_univariate(X, "x", [1, 0, Fraction(1, 2)]) == p("1/2*x^2 + 1", X)

    def test_gcd_is_monic(self):
        assert univariate_gcd(p("2*x^2 - 2", X), p("3*x + 3", X), "x") == p("x + 1", X)

    def test_squarefree_part(self):
        f = p("5", X) * p("x - 1", X) ** 2 * p("x + 2", X) ** 3
        assert squarefree_part(f, "x").total_degree() == 2

    def test_squarefree_factorization(self):
        f = p("5", X) * p("x - 1", X) ** 2 * p("x + 2", X) ** 3
        assert squarefree_factorization(f, "x") == [(p("x - 1", X), 2), (p("x + 2", X), 3)]

    def test_squarefree_zero(self):
        with pytest.raises(PolynomialError):
            squarefree_part(MPoly.zero(X), "x")
        with pytest.raises(PolynomialError):
            squarefree_factorization(MPoly.zero(X), "x")
