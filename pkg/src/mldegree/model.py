# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Algebraic statistical model of a chemical equilibrium.

For a reaction with reactant coefficients alpha and product coefficients beta, the
species concentrations at equilibrium satisfy K_e * prod(reactant^alpha) = prod(product^beta),
with K_e taken as products over reactants.  Dividing out the total concentration turns
the concentrations into frequencies on the probability simplex.  The model is the
variety of that equation, optionally homogenized by the linear form L = sum of
frequencies so it can be treated projectively.

Each supported reaction shape also has a monomial parameterization by a torus of
dimension 1 or 2.  Where the parameterization needs a k-th root of K_e, the root is
carried as a constant symbol s with the relation s^k = K_e.
"""
import itertools
import logging
import math
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Mapping, Optional, Tuple, Union

from attrs import field, frozen

from mldegree.errors import DegenerateModelError, NonExactDivisionError, PolynomialError, UnsupportedShapeError
from mldegree.poly import MPoly, Role, VarContext, eval_complex, exact_divide, substitute
from mldegree.reaction import Reaction, format_reaction

KE = "K_e"
RADICAL = "s"
GENERIC = "generic"

NORMALIZATION_NOTE = "total concentration c > 0 divided out, so species frequencies sum to 1"


class Shape(str, Enum):
    """Reaction shapes with a known parameterization."""

    SINGLE = "single"  # aA <-> bB
    BINARY = "binary"  # nA + mB <-> pC
    CHAIN = "chain"  # A1 + ... + An <-> B1 + ... + Bn
    SEGRE = "segre"  # A + B <-> C + D


SUPPORTED_SHAPES = (
    "aA <-> bB (one reactant, one product)",
    "nA + mB <-> pC (two reactants, one product)",
    "A1 + ... + An <-> B1 + ... + Bn (balanced chain, all coefficients 1)",
    "A + B <-> C + D (closed form)",
)


def _ke_value(value: Union[None, int, str, Fraction]) -> Optional[Fraction]:
    return None if value is None else Fraction(value)


@frozen
class EquilibriumConstant:
    """An equilibrium constant, either an exact rational or the generic symbol K_e."""

    value: Optional[Fraction] = field(default=None, converter=_ke_value)
    positivity_flag: bool = field(init=False)

    @positivity_flag.default
    def _positivity_flag(self) -> bool:
        return self.value is None or self.value > 0

    @staticmethod
    def generic() -> "EquilibriumConstant":
        return EquilibriumConstant(None)

    @staticmethod
    def parse(text: str) -> "EquilibriumConstant":
        """Parse "generic" or a rational like "4", "-1", "1/2" or "0.5"."""
        if text.strip().lower() == GENERIC:
            return EquilibriumConstant.generic()
        try:
            return EquilibriumConstant(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise PolynomialError("Invalid equilibrium constant: '%s'" % text) from e

    @property
    def is_generic(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return GENERIC if self.value is None else str(self.value)


@frozen
class EquilibriumModel:
    """The equilibrium polynomial, the simplex constraint and the homogenized form."""

    reaction: Reaction
    ke: EquilibriumConstant
    ctx: VarContext
    species_vars: Tuple[str, ...]
    f_affine: MPoly
    constraint: MPoly
    f_hom: MPoly
    linear_form: MPoly
    warnings: Tuple[str, ...] = ()
    normalization_note: str = NORMALIZATION_NOTE

    @property
    def label(self) -> str:
        return "%s, K_e=%s" % (format_reaction(self.reaction), self.ke)


@frozen
class RadicalRelation:
    """The relation symbol^power = value, value being a rational constant or K_e."""

    symbol: str
    power: int
    value: MPoly

    def __str__(self) -> str:
        return "%s^%d = %s" % (self.symbol, self.power, self.value) if self.power > 1 else "%s = %s" % (self.symbol, self.value)


@frozen
class MonomialMap:
    """
    Monomial parameterization of a model.

    Image j is coefficients[j] times the product over parameters i of param_vars[i] raised
    to exponent_matrix[i][j].  The Segre shape is handled in closed form and has no
    parameters at all.
    """

    model: EquilibriumModel
    shape: Shape
    ctx: VarContext
    param_vars: Tuple[str, ...]
    exponent_matrix: Tuple[Tuple[int, ...], ...]
    coefficients: Tuple[MPoly, ...]
    relation: Optional[RadicalRelation] = None
    caveats: Tuple[str, ...] = ()

    @property
    def is_closed_form(self) -> bool:
        return not self.param_vars

    def images(self) -> List[MPoly]:
        """Species coordinates as polynomials in the parameters."""
        result = []
        for j, coefficient in enumerate(self.coefficients):
            powers = {name: self.exponent_matrix[i][j] for i, name in enumerate(self.param_vars)}
            result.append(coefficient * MPoly.monomial(self.ctx, 1, powers))
        return result

    def constant_values(self, ke: Optional[Fraction] = None) -> Dict[str, complex]:
        """Numeric values for the constant symbols, using the real root of the radical relation where one exists."""
        value = ke if ke is not None else self.model.ke.value
        values: Dict[str, complex] = {}
        if KE in self.ctx:
            if value is None:
                raise PolynomialError("A numeric K_e is needed to evaluate this parameterization")
            values[KE] = complex(value)
        if self.relation:
            target = complex(self.relation.value.constant_value()) if self.relation.value.is_constant() else values[KE]
            values[self.relation.symbol] = real_root(target, self.relation.power)
        return values

    def evaluate(self, point: Mapping[str, complex], ke: Optional[Fraction] = None) -> Tuple[complex, ...]:
        """Species coordinates at a parameter point."""
        bound = dict(self.constant_values(ke))
        bound.update(point)
        return tuple(eval_complex(image, bound) for image in self.images())


def real_root(value: complex, power: int) -> complex:
    """The positive real root of a positive value, the real root for odd powers, otherwise the principal root."""
    if value.imag == 0 and value.real > 0:
        return complex(value.real ** (1.0 / power))
    if value.imag == 0 and value.real < 0 and power % 2 == 1:
        return complex(-((-value.real) ** (1.0 / power)))
    return value ** (1.0 / power)


def species_names(count: int) -> Tuple[str, ...]:
    """Frequency variable names: x, y, z, t for up to four species, otherwise p0, p1, ..."""
    return ("x", "y", "z", "t")[:count] if count <= 4 else tuple("p%d" % i for i in range(count))


def build_model(r: Reaction, k: EquilibriumConstant) -> EquilibriumModel:
    """Build the equilibrium model for a reaction and an equilibrium constant."""
    if not r.is_equilibrium:
        raise UnsupportedShapeError("Only equilibrium reactions (<->) define a model: %s" % format_reaction(r), SUPPORTED_SHAPES)
    names = species_names(len(r.species()))
    ctx = VarContext.build(unknowns=names, constants=[KE] if k.is_generic else [])
    coefficients = [term.coefficient for term in r.reactants + r.products]
    split = len(r.reactants)
    reactant = MPoly.monomial(ctx, 1, dict(zip(names[:split], coefficients[:split])))
    product = MPoly.monomial(ctx, 1, dict(zip(names[split:], coefficients[split:])))
    ke = MPoly.var(ctx, KE) if k.is_generic else MPoly.constant(ctx, k.value)  # type: ignore[arg-type]
    linear_form = reduce(lambda a, b: a + b, [MPoly.var(ctx, name) for name in names])
    order, product_order = sum(coefficients[:split]), sum(coefficients[split:])
    degree = max(order, product_order)
    f_affine = ke * reactant - product
    f_hom = ke * reactant * linear_form ** (degree - order) - product * linear_form ** (degree - product_order)
    warnings = []
    if not k.positivity_flag:
        warnings.append("K_e = %s is not positive; a physical equilibrium constant is always positive" % k)
        logging.warning("[%s] Nonphysical equilibrium constant K_e=%s", format_reaction(r), k)
    model = EquilibriumModel(
        reaction=r,
        ke=k,
        ctx=ctx,
        species_vars=names,
        f_affine=f_affine,
        constraint=linear_form - 1,
        f_hom=f_hom,
        linear_form=linear_form,
        warnings=tuple(warnings),
    )
    logging.debug("[%s] Built model F=%s, F_hom=%s", model.label, f_affine, f_hom)
    return model


def detect_shape(r: Reaction) -> Shape:
    """Detect the parameterization shape of a reaction."""
    reactants, products = r.reactants, r.products
    ones = all(term.coefficient == 1 for term in reactants + products)
    if len(reactants) == 2 and len(products) == 2 and ones:
        return Shape.SEGRE
    if len(reactants) == len(products) >= 3 and ones:
        return Shape.CHAIN
    if len(reactants) == 1 and len(products) == 1:
        return Shape.SINGLE
    if len(reactants) == 2 and len(products) == 1:
        return Shape.BINARY
    raise UnsupportedShapeError("Unsupported reaction shape: %s" % format_reaction(r), SUPPORTED_SHAPES)


def _check_override(r: Reaction, shape: Shape) -> None:
    reactants, products = r.reactants, r.products
    ones = all(term.coefficient == 1 for term in reactants + products)
    valid = {
        Shape.SEGRE: len(reactants) == 2 and len(products) == 2 and ones,
        Shape.CHAIN: len(reactants) == len(products) >= 2 and ones,
        Shape.SINGLE: len(reactants) == 1 and len(products) == 1,
        Shape.BINARY: len(reactants) == 2 and len(products) == 1,
    }
    if not valid[shape]:
        raise UnsupportedShapeError("Reaction %s does not have shape %s" % (format_reaction(r), shape.value), SUPPORTED_SHAPES)


def _integer_root(n: int, d: int) -> Optional[int]:
    """Exact d-th root of a nonnegative integer, if there is one."""
    low, high = 0, 1
    while high**d <= n:
        high *= 2
    while low < high - 1:
        middle = (low + high) // 2
        if middle**d <= n:
            low = middle
        else:
            high = middle
    return low if low**d == n else None


def rational_root(value: Fraction, d: int) -> Optional[Fraction]:
    """Exact rational d-th root, positive for positive values, negative for negative values and odd d."""
    if value < 0 and d % 2 == 0:
        return None
    numerator = _integer_root(abs(value.numerator), d)
    denominator = _integer_root(value.denominator, d)
    if numerator is None or denominator is None:
        return None
    return Fraction(numerator, denominator) * (-1 if value < 0 else 1)


def _radical(k: EquilibriumConstant, power: int) -> Tuple[List[str], Optional[Fraction], Optional[Tuple[int, Fraction]]]:
    """
    Work out how to represent a root of s^power = K_e.

    Returns the constant symbols needed, an exact coefficient when the root is rational,
    and otherwise the reduced relation as (power, value).
    """
    if k.value is None:
        return ([KE] if power == 1 else [RADICAL, KE]), None, None
    for d in sorted((d for d in range(1, power + 1) if power % d == 0), reverse=True):
        root = rational_root(k.value, d)
        if root is not None:
            if d == power:
                return [], root, None
            return [RADICAL], None, (power // d, root)
    raise PolynomialError("No rational root found for K_e=%s, which cannot happen for d=1" % k)  # pragma: no cover


def _shape_data(r: Reaction, shape: Shape) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[bool, ...], int]:
    """Exponent matrix, which images carry the radical, and the radical power."""
    if shape == Shape.SINGLE:
        alpha, beta = r.reactants[0].coefficient, r.products[0].coefficient
        g = math.gcd(alpha, beta)
        return ((beta // g, alpha // g),), (False, True), beta
    if shape == Shape.BINARY:
        n, m, p = r.reactants[0].coefficient, r.reactants[1].coefficient, r.products[0].coefficient
        return ((p, 0, n), (0, p, m)), (False, False, True), p
    if shape == Shape.CHAIN:
        n = len(r.reactants)
        return ((1,) * (2 * n),), (False,) * n + (True,) * n, n
    raise UnsupportedShapeError("Shape %s has no parameterization" % shape.value, SUPPORTED_SHAPES)


def build_parameterization(m: EquilibriumModel, shape: Optional[Shape] = None) -> MonomialMap:
    """Build and verify the monomial parameterization of a model."""
    if shape:
        _check_override(m.reaction, shape)
    else:
        shape = detect_shape(m.reaction)
    caveats = []
    if shape == Shape.CHAIN:
        caveats.append("parameterization does not cover the model (one parameter for a higher-dimensional variety)")
    if shape == Shape.SEGRE:
        return MonomialMap(m, shape, VarContext([]), (), (), (), None, ("closed form, no parameterization",))
    matrix, carries, power = _shape_data(m.reaction, shape)
    params = ("t0", "t1")[: len(matrix)]
    constants, exact, reduced = _radical(m.ke, power)
    ctx = VarContext.build(unknowns=params, constants=constants)
    relation = None
    if exact is not None:
        if exact == 0:
            raise DegenerateModelError("K_e = 0 sends the parameterization outside the torus; the model is degenerate")
        radical = MPoly.constant(ctx, exact)
    elif reduced is not None:
        radical = MPoly.var(ctx, RADICAL)
        relation = RadicalRelation(RADICAL, reduced[0], MPoly.constant(ctx, reduced[1]))
    elif power == 1:
        radical = MPoly.var(ctx, KE)
    else:
        radical = MPoly.var(ctx, RADICAL)
        relation = RadicalRelation(RADICAL, power, MPoly.var(ctx, KE))
    coefficients = tuple(radical if carry else MPoly.constant(ctx, 1) for carry in carries)
    result = MonomialMap(m, shape, ctx, params, matrix, coefficients, relation, tuple(caveats))
    check = pullback(m, result)
    if not check.is_zero():
        raise PolynomialError("Parameterization does not satisfy the model, pull-back is %s" % check)
    logging.debug("[%s] Parameterization %s", m.label, ", ".join(str(image) for image in result.images()))
    return result


def reduce_radical(a: MPoly, relation: Optional[RadicalRelation]) -> MPoly:
    """Reduce every power of the radical symbol below the relation's power."""
    if relation is None or relation.symbol not in a.ctx:
        return a
    value = relation.value.in_context(a.ctx)
    result = MPoly.zero(a.ctx)
    for power, coefficient in a.coefficients_in(relation.symbol).items():
        quotient, remainder = divmod(power, relation.power)
        result = result + coefficient * value**quotient * MPoly.var(a.ctx, relation.symbol, remainder)
    return result


def pullback(m: EquilibriumModel, mapping: MonomialMap) -> MPoly:
    """Compose F_affine with the parameterization, reduced modulo the radical relation."""
    combined = VarContext.build(
        unknowns=m.species_vars + mapping.param_vars,
        constants=mapping.ctx.names_with_role(Role.CONSTANT),
    )
    images = [image.in_context(combined) for image in mapping.images()]
    composed = substitute(m.f_affine.in_context(combined), dict(zip(m.species_vars, images)))
    return reduce_radical(composed.in_context(mapping.ctx), mapping.relation)


def _int_det(rows: List[List[int]]) -> int:
    if len(rows) == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * _int_det([row[:j] + row[j + 1 :] for row in rows[1:]]) for j in range(len(rows)))


def fiber_degree(mapping: MonomialMap) -> int:
    """Generic fiber size of the torus map, the gcd of the maximal minors of the exponent matrix."""
    if mapping.is_closed_form:
        return 1
    rows = len(mapping.exponent_matrix)
    cols = len(mapping.exponent_matrix[0])
    minors = [
        _int_det([[mapping.exponent_matrix[i][j] for j in chosen] for i in range(rows)])
        for chosen in itertools.combinations(range(cols), rows)
    ]
    degree = reduce(math.gcd, [abs(minor) for minor in minors], 0)
    if degree == 0:
        raise PolynomialError("Exponent matrix does not have full row rank")
    return degree


@frozen
class KeClassification:
    """Classification of an equilibrium constant for a given model."""

    degenerate: Optional[str] = None
    nonphysical: bool = False

    @property
    def label(self) -> str:
        labels = (["degenerate"] if self.degenerate else []) + (["nonphysical_warning"] if self.nonphysical else [])
        return "+".join(labels) if labels else "generic"


def _strip_arrangement(m: EquilibriumModel) -> MPoly:
    """Divide out every factor of F_hom that is L or a coordinate."""
    remaining = m.f_hom
    for factor in [m.linear_form] + [MPoly.var(m.ctx, name) for name in m.species_vars]:
        while not remaining.is_constant():
            try:
                remaining = exact_divide(remaining, factor)
            except NonExactDivisionError:
                break
    return remaining


def classify_ke(m: EquilibriumModel, detected_drop: Optional[str] = None) -> KeClassification:
    """Classify the equilibrium constant as generic, degenerate or nonphysical."""
    if m.ke.is_generic:
        return KeClassification(degenerate=detected_drop)
    reasons = []
    if m.ke.value == 0:
        reasons.append("K_e = 0 removes the reactant monomial, so the model reduces to a coordinate subvariety")
    elif _strip_arrangement(m).is_constant():
        reasons.append("the model lies inside the arrangement of coordinate hyperplanes and L = 0")
    if detected_drop:
        reasons.append(detected_drop)
    classification = KeClassification(degenerate="; ".join(reasons) or None, nonphysical=not m.ke.positivity_flag)
    logging.debug("[%s] K_e classified as %s", m.label, classification.label)
    return classification


def with_generic_ke(m: EquilibriumModel) -> EquilibriumModel:
    """The same reaction with a generic equilibrium constant."""
    return m if m.ke.is_generic else build_model(m.reaction, EquilibriumConstant.generic())


def dump_model(m: EquilibriumModel, mapping: Optional[MonomialMap] = None) -> str:
    """Text dump of a model, one item per line."""
    lines = [
        "reaction: %s" % format_reaction(m.reaction),
        "ke: %s" % m.ke,
        "f_affine: %s" % m.f_affine,
        "constraint: %s" % m.constraint,
        "f_hom: %s" % m.f_hom,
        "homogenized_by: L = %s" % m.linear_form,
    ]
    if mapping is not None:
        lines.append("shape: %s" % mapping.shape.value)
        for name, image in zip(m.species_vars, mapping.images()):
            lines.append("image %s: %s" % (name, image))
        if mapping.relation:
            lines.append("relation: %s" % mapping.relation)
    lines += ["warning: %s" % warning for warning in m.warnings]
    return "\n".join(lines)

