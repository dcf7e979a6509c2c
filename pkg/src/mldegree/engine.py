# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Count critical points of the likelihood in parameter space, by resultant elimination.

The log-likelihood pulled back through a monomial parameterization is a sum of
w_i log t_i terms, and the constraint is g = (sum of images) - 1.  Clearing the
denominators of the Lagrange conditions gives one equation per parameter:

    f_i = lambda * t_i * dg/dt_i - w_i

With two parameters, t0 is eliminated with a Sylvester resultant and the critical
points are counted as the degree minus the valuation of the eliminant in t1, i.e.
its roots different from zero, counted with multiplicity.  Lambda and the counts stay
symbolic throughout.
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from attrs import field, frozen

from mldegree.config import ToleranceConfig
from mldegree.errors import DegenerateModelError, InvalidCountsError, UnsupportedShapeError
from mldegree.model import (
    KE,
    SUPPORTED_SHAPES,
    EquilibriumConstant,
    EquilibriumModel,
    KeClassification,
    MonomialMap,
    RadicalRelation,
    Shape,
    build_parameterization,
    classify_ke,
    detect_shape,
    fiber_degree,
    reduce_radical,
    with_generic_ke,
)
from mldegree.poly import (
    MPoly,
    Role,
    VarContext,
    degree_profile,
    eval_complex,
    partial_derivative,
    resultant,
    substitute,
)
from mldegree.roots import newton_system, relative_residual, solve_bivariate, univariate_roots

LAGRANGE = "lambda"

# Newton steps on the full Lagrange system before residuals are checked
POLISH_STEPS = 10

HOMOGENIZATION_NOTE = "homogenized with L = sum of species frequencies, from the total concentration constraint"
SEGRE_NOTE = "closed form: the model is P1 x P1 and the Euler characteristic of its complement of H is (-1)(-1) = 1"
SEGRE_KE_NOTE = "the factorization of the sum hyperplane behind the closed form is exact only for K_e = 1"


def _counts(_instance: "ObservationCounts", _attribute: object, value: Optional[Tuple[int, ...]]) -> None:
    if value is None:
        return
    if len(value) != _instance.size:
        raise InvalidCountsError("Expected %d counts, got %d" % (_instance.size, len(value)))
    if any(u < 0 for u in value) or sum(value) <= 0:
        raise InvalidCountsError("Counts must be nonnegative with a positive sum: %s" % ",".join(str(u) for u in value))


@frozen
class ObservationCounts:
    """Observed counts, one per species, either symbolic (u0, u1, ...) or numeric."""

    size: int
    values: Optional[Tuple[int, ...]] = field(default=None, converter=lambda v: None if v is None else tuple(v), validator=_counts)

    @staticmethod
    def symbolic(size: int) -> "ObservationCounts":
        return ObservationCounts(size)

    @staticmethod
    def numeric(values: Sequence[int]) -> "ObservationCounts":
        return ObservationCounts(len(values), tuple(values))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple("u%d" % i for i in range(self.size))

    @property
    def is_symbolic(self) -> bool:
        return self.values is None

    @property
    def sample_size(self) -> Optional[int]:
        return None if self.values is None else sum(self.values)

    def polys(self, ctx: VarContext) -> List[MPoly]:
        if self.values is None:
            return [MPoly.var(ctx, name) for name in self.names]
        return [MPoly.constant(ctx, value) for value in self.values]


@frozen
class CriticalSystem:
    """Denominator-cleared Lagrange equations of the pulled-back likelihood."""

    map: MonomialMap
    counts: ObservationCounts
    ctx: VarContext
    constraint_pullback: MPoly
    weights: Tuple[MPoly, ...]
    equations: Tuple[MPoly, ...]

    @property
    def surviving(self) -> str:
        """The parameter left after elimination."""
        return self.map.param_vars[-1]


@frozen
class MLDegreeReport:
    """Result of a faithful ML degree computation."""

    reaction: str
    ke: str
    shape: str
    parameter_space_count: Optional[int]
    fiber_degree: int
    variety_count_quotient: Optional[Fraction]
    degeneracy: KeClassification
    eliminant: Optional[MPoly] = None
    eliminant_degree: Optional[int] = None
    eliminant_valuation: Optional[int] = None
    generic_count: Optional[int] = None
    caveats: Tuple[str, ...] = ()
    homogenization: str = HOMOGENIZATION_NOTE


@frozen
class ParameterPoint:
    """A numeric critical point in parameter space, with its image in species coordinates."""

    params: Tuple[complex, ...]
    lagrange: complex
    species: Tuple[complex, ...]
    residuals: Tuple[float, ...]
    converged: bool = True

    @property
    def residual_max(self) -> float:
        return max(self.residuals)


def build_critical_system(mapping: MonomialMap, u: ObservationCounts) -> CriticalSystem:
    """Build the critical equations for a parameterization with one or two parameters."""
    if mapping.is_closed_form or len(mapping.param_vars) > 2:
        raise UnsupportedShapeError("Critical systems need a parameterization with 1 or 2 parameters", SUPPORTED_SHAPES)
    if u.size != len(mapping.coefficients):
        raise InvalidCountsError("Expected %d counts, got %d" % (len(mapping.coefficients), u.size))
    ctx = VarContext.build(
        unknowns=mapping.param_vars,
        lagrange=LAGRANGE,
        counts=u.names if u.is_symbolic else (),
        constants=mapping.ctx.names_with_role(Role.CONSTANT),
    )
    images = [image.in_context(ctx) for image in mapping.images()]
    g = sum(images, MPoly.constant(ctx, -1))
    counts = u.polys(ctx)
    lagrange = MPoly.var(ctx, LAGRANGE)
    weights, equations = [], []
    for i, name in enumerate(mapping.param_vars):
        weight = sum((counts[j] * mapping.exponent_matrix[i][j] for j in range(len(counts))), MPoly.zero(ctx))
        weights.append(weight)
        equations.append(lagrange * MPoly.var(ctx, name) * partial_derivative(g, name) - weight)
    return CriticalSystem(mapping, u, ctx, g, tuple(weights), tuple(equations))


def _relation_in(cs: CriticalSystem) -> Optional[RadicalRelation]:
    relation = cs.map.relation
    if relation is None:
        return None
    return RadicalRelation(relation.symbol, relation.power, relation.value.in_context(cs.ctx))


def eliminate(cs: CriticalSystem) -> MPoly:
    """Eliminate all parameters but the last, reduced modulo the radical relation."""
    if len(cs.equations) == 1:
        return cs.equations[0]
    f0, f1 = cs.equations
    eliminant = reduce_radical(resultant(f0, f1, cs.map.param_vars[0]), _relation_in(cs))
    if eliminant.is_zero():
        raise DegenerateModelError("Resultant vanishes identically, so f0 = %s and f1 = %s share a common factor" % (f0, f1))
    return eliminant


def _count(cs: CriticalSystem) -> Tuple[MPoly, int, int]:
    eliminant = eliminate(cs)
    degree, valuation = degree_profile(eliminant, cs.surviving)
    return eliminant, degree, valuation


def ml_degree_faithful(cs: CriticalSystem) -> MLDegreeReport:
    """Count critical points in parameter space, comparing a specialized K_e against the generic symbol."""
    model = cs.map.model
    fiber = fiber_degree(cs.map)
    caveats = list(cs.map.caveats) + list(model.warnings)
    try:
        eliminant, degree, valuation = _count(cs)
    except DegenerateModelError as e:
        logging.info("[%s] %s", model.label, e.message)
        return MLDegreeReport(
            reaction=str(model.reaction),
            ke=str(model.ke),
            shape=cs.map.shape.value,
            parameter_space_count=None,
            fiber_degree=fiber,
            variety_count_quotient=None,
            degeneracy=classify_ke(model, e.message),
            caveats=tuple(caveats),
        )
    count = degree - valuation
    generic_count = count
    drop = None
    if not model.ke.is_generic:
        generic = build_parameterization(with_generic_ke(model), cs.map.shape)
        _, generic_degree, generic_valuation = _count(build_critical_system(generic, ObservationCounts.symbolic(cs.counts.size)))
        generic_count = generic_degree - generic_valuation
        if count < generic_count:
            drop = "count drops from %d to %d at K_e = %s" % (generic_count, count, model.ke)
            logging.info("[%s] Degenerate equilibrium constant: %s", model.label, drop)
    if count > fiber and count % fiber != 0:
        caveats.append("parameter-space count %d is not a multiple of the fiber degree %d" % (count, fiber))
    logging.debug("[%s] Eliminant degree %d, valuation %d, count %d", model.label, degree, valuation, count)
    return MLDegreeReport(
        reaction=str(model.reaction),
        ke=str(model.ke),
        shape=cs.map.shape.value,
        parameter_space_count=count,
        fiber_degree=fiber,
        variety_count_quotient=Fraction(count, fiber),
        degeneracy=classify_ke(model, drop),
        eliminant=eliminant,
        eliminant_degree=degree,
        eliminant_valuation=valuation,
        generic_count=generic_count,
        caveats=tuple(caveats),
    )


def _closed_form(model: EquilibriumModel, mapping: MonomialMap) -> MLDegreeReport:
    degeneracy = classify_ke(model)
    caveats = [SEGRE_NOTE] + ([SEGRE_KE_NOTE] if model.ke.value != 1 else []) + list(model.warnings)
    count = None if degeneracy.degenerate else 1
    return MLDegreeReport(
        reaction=str(model.reaction),
        ke=str(model.ke),
        shape=mapping.shape.value,
        parameter_space_count=count,
        fiber_degree=1,
        variety_count_quotient=None if count is None else Fraction(count),
        degeneracy=degeneracy,
        generic_count=1,
        caveats=tuple(caveats),
    )


def compute_ml_degree(model: EquilibriumModel, shape: Optional[Shape] = None) -> MLDegreeReport:
    """Faithful ML degree of a model, from its parameterization."""
    logging.info("[%s] Computing parameter-space ML degree", model.label)
    try:
        mapping = build_parameterization(model, shape)
    except DegenerateModelError as e:
        logging.info("[%s] %s", model.label, e.message)
        return MLDegreeReport(
            reaction=str(model.reaction),
            ke=str(model.ke),
            shape=(shape or detect_shape(model.reaction)).value,
            parameter_space_count=None,
            fiber_degree=1,
            variety_count_quotient=None,
            degeneracy=classify_ke(model, e.message),
            caveats=tuple(model.warnings),
        )
    if mapping.is_closed_form:
        return _closed_form(model, mapping)
    return ml_degree_faithful(build_critical_system(mapping, ObservationCounts.symbolic(len(model.species_vars))))


def _specialize(cs: CriticalSystem, u: Sequence[int], k: EquilibriumConstant) -> Tuple[Dict[str, MPoly], Optional[RadicalRelation]]:
    """Substitute numeric counts and K_e into the pieces of the system needed for solving."""
    bindings: Dict[str, Fraction] = {}
    if cs.counts.is_symbolic:
        bindings.update({name: Fraction(value) for name, value in zip(cs.counts.names, u)})
    if KE in cs.ctx:
        bindings[KE] = k.value  # type: ignore[assignment]
    a = [MPoly.var(cs.ctx, name) * partial_derivative(cs.constraint_pullback, name) for name in cs.map.param_vars]
    pieces = {"g": cs.constraint_pullback, "a0": a[0], "w0": cs.weights[0]}
    pieces.update({"f%d" % i: equation for i, equation in enumerate(cs.equations)})
    if len(a) > 1:
        pieces.update({"a1": a[1], "w1": cs.weights[1]})
        pieces["e"] = cs.weights[1] * a[0] - cs.weights[0] * a[1]
    specialized = {key: substitute(value, bindings) if bindings else value for key, value in pieces.items()}
    relation = _relation_in(cs)
    if relation and bindings:
        relation = RadicalRelation(relation.symbol, relation.power, substitute(relation.value, bindings))
    return specialized, relation


def solve_critical_numeric(
    cs: CriticalSystem, u: Sequence[int], k: EquilibriumConstant, tolerances: Optional[ToleranceConfig] = None
) -> List[ParameterPoint]:
    """
    Solve the critical system numerically for given counts and equilibrium constant.

    Lambda is eliminated first: lambda = w0 / (t0 dg/dt0), which turns the remaining
    conditions into E = w1 t0 dg/dt0 - w0 t1 dg/dt1.  The system {E, g} is reduced to one
    variable with a resultant and its roots are found numerically.  Each root is completed
    from g and then polished with Newton steps on every f_i and g in the parameters and
    lambda together.  A point whose residual stays above tolerance is kept, marked as not
    converged, and logged.
    """
    tolerances = tolerances or ToleranceConfig()
    counts = ObservationCounts.numeric(u)
    if any(value < 1 for value in u):
        raise InvalidCountsError("Numeric solving needs every count to be at least 1")
    if k.value is None or k.value <= 0:
        raise InvalidCountsError("Numeric solving needs a positive numeric K_e")
    if counts.size != cs.counts.size:
        raise InvalidCountsError("Expected %d counts, got %d" % (cs.counts.size, counts.size))
    pieces, relation = _specialize(cs, u, k)
    constants = cs.map.constant_values(k.value)
    names = cs.map.param_vars

    def reduce(f: MPoly) -> MPoly:
        return reduce_radical(f, relation)

    candidates: List[Tuple[complex, ...]]
    if len(names) == 1:
        candidates = [(root,) for root in univariate_roots(reduce(pieces["g"]), names[0], constants, tolerances)]
    else:
        candidates = list(solve_bivariate(pieces["g"], pieces["e"], (names[0], names[1]), constants, tolerances, reduce))
    points: List[ParameterPoint] = []
    for candidate in candidates:
        if any(abs(value) < tolerances.discard for value in candidate):
            continue
        point = dict(constants)
        point.update(dict(zip(names, candidate)))
        a0 = eval_complex(pieces["a0"], point)
        if a0 == 0:
            continue
        lagrange = complex(eval_complex(pieces["w0"], point)) / a0
        point[LAGRANGE] = lagrange
        candidate, lagrange, residuals = _polish(cs, counts, k, pieces, constants, point)
        if any(_close(candidate, existing.params, tolerances.cluster) for existing in points):
            continue
        converged = max(residuals) < tolerances.residual
        if not converged:
            logging.warning(
                "[%s] Critical point %s kept with residual %.3g above tolerance %.3g",
                cs.map.model.label,
                candidate,
                max(residuals),
                tolerances.residual,
            )
        species = cs.map.evaluate(dict(zip(names, candidate)), k.value)
        points.append(ParameterPoint(candidate, lagrange, species, residuals, converged))
    logging.debug("[%s] Found %d numeric parameter-space critical points", cs.map.model.label, len(points))
    return points


def _polish(
    cs: CriticalSystem,
    counts: ObservationCounts,
    k: EquilibriumConstant,
    pieces: Dict[str, MPoly],
    constants: Dict[str, complex],
    point: Dict[str, complex],
) -> Tuple[Tuple[complex, ...], complex, Tuple[float, ...]]:
    """Newton steps on every Lagrange equation and the constraint, in the parameters and lambda together."""
    names = tuple(cs.map.param_vars) + (LAGRANGE,)
    system = [pieces["f%d" % i] for i in range(len(cs.equations))] + [pieces["g"]]
    start = tuple(point[name] for name in names)
    best = (start, _residuals(cs, counts, k, point))
    polished = newton_system(system, names, start, constants, steps=POLISH_STEPS)
    try:
        residuals = _residuals(cs, counts, k, {**constants, **dict(zip(names, polished))})
    except OverflowError:
        residuals = best[1]
    if all(math.isfinite(value) for value in residuals) and max(residuals) < max(best[1]):
        best = (polished, residuals)
    values, residuals = best
    return values[:-1], values[-1], residuals


def _close(a: Tuple[complex, ...], b: Tuple[complex, ...], tolerance: float) -> bool:
    scale = max([1.0] + [abs(value) for value in a])
    return max(abs(x - y) for x, y in zip(a, b)) <= tolerance * scale


def _residuals(cs: CriticalSystem, counts: ObservationCounts, k: EquilibriumConstant, point: Dict[str, complex]) -> Tuple[float, ...]:
    """Relative residuals of f0, f1, ... and g at a numeric point."""
    bound = dict(point)
    if cs.counts.is_symbolic:
        bound.update({name: complex(value) for name, value in zip(cs.counts.names, counts.values or ())})
    if KE in cs.ctx:
        bound[KE] = complex(k.value)  # type: ignore[arg-type]
    return tuple(relative_residual(f, bound) for f in list(cs.equations) + [cs.constraint_pullback])


def model_points(points: Sequence[ParameterPoint], tolerance: float) -> List[Tuple[complex, ...]]:
    """Distinct species-coordinate images of parameter points, grouping each fiber orbit into one point."""
    distinct: List[Tuple[complex, ...]] = []
    for point in points:
        if not any(_close(point.species, existing, tolerance) for existing in distinct):
            distinct.append(point.species)
    return distinct

