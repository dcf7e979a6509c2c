# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Maximum likelihood estimation on an equilibrium model.

Candidates for the estimate are the critical points of the likelihood off the
arrangement H.  How they are found depends on the number of species:

- two species: the simplex constraint cuts the model down to finitely many points
- three species: the model is a plane curve, and the critical points come from the curve oracle
- A + B <-> C + D: the model is P1 x P1, solved in closed form when K_e = 1 and on a chart otherwise

The optimum is the candidate in the open probability simplex with the largest likelihood.
"""
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from attrs import frozen

from mldegree.config import SolverConfig
from mldegree.curve import PlaneCurve, count_critical_points_variety, variety_critical_system
from mldegree.errors import InvalidCountsError, NoPositiveCriticalPointError, UnsupportedShapeError
from mldegree.model import SUPPORTED_SHAPES, EquilibriumModel, Shape, detect_shape
from mldegree.poly import MPoly, Role, VarContext, substitute
from mldegree.roots import complex_roots, relative_residual, solve_bivariate

# Imaginary parts and sums are compared against this when classifying a point
CLASSIFY_TOLERANCE = 1.0e-9


class Classification(str, Enum):
    POSITIVE = "positive_real_simplex"
    REAL_NONPOSITIVE = "real_nonpositive"
    COMPLEX = "complex"


def classify(coordinates: Sequence[complex], tolerance: float = CLASSIFY_TOLERANCE) -> Classification:
    """Classify a point whose coordinates are meant to sum to 1."""
    if any(abs(value.imag) >= tolerance for value in coordinates):
        return Classification.COMPLEX
    if all(value.real > 0 for value in coordinates) and abs(sum(value.real for value in coordinates) - 1) < tolerance:
        return Classification.POSITIVE
    return Classification.REAL_NONPOSITIVE


@frozen
class CriticalPoint:
    """A critical point of the likelihood in species frequencies."""

    coordinates: Tuple[complex, ...]
    residuals: Tuple[float, ...]
    classification: Classification

    @staticmethod
    def of(coordinates: Sequence[complex], residuals: Sequence[float]) -> "CriticalPoint":
        return CriticalPoint(tuple(complex(value) for value in coordinates), tuple(residuals), classify(coordinates))

    @property
    def real(self) -> Tuple[float, ...]:
        return tuple(value.real for value in self.coordinates)

    @property
    def residual_max(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


@frozen
class MLEResult:
    """The maximum likelihood estimate, with every critical point found along the way."""

    optimum: CriticalPoint
    log_likelihood: float
    all_critical_points: Tuple[CriticalPoint, ...]
    observed_ml_count: int


@frozen
class ResidualRow:
    coordinates: Tuple[complex, ...]
    residual_max: float
    flagged: bool


def _check_counts(u: Sequence[int]) -> None:
    if any(value < 0 for value in u) or sum(u) <= 0:
        raise InvalidCountsError("Counts must be nonnegative with a positive sum: %s" % ",".join(str(value) for value in u))


def likelihood_value(p: Sequence[float], u: Sequence[int]) -> float:
    """Log-likelihood sum(u_i log p_i) - (sum u) log(sum p), invariant under scaling p."""
    if len(p) != len(u):
        raise InvalidCountsError("Expected %d counts, got %d" % (len(p), len(u)))
    if any(value <= 0 for value in p):
        raise ValueError("Likelihood needs strictly positive coordinates: %s" % list(p))
    _check_counts(u)
    return math.fsum(count * math.log(value) for count, value in zip(u, p)) - sum(u) * math.log(math.fsum(p))


def hardy_weinberg_estimate(u: Sequence[int]) -> Tuple[Fraction, Fraction, Fraction]:
    """Closed-form estimate (t^2, (1-t)^2, 2t(1-t)) on z^2 = 4xy, with t = (2u0 + u2) / (2 sum u)."""
    if len(u) != 3:
        raise InvalidCountsError("Expected 3 counts, got %d" % len(u))
    _check_counts(u)
    theta = Fraction(2 * u[0] + u[2], 2 * sum(u))
    return theta**2, (1 - theta) ** 2, 2 * theta * (1 - theta)


def residual_report(points: Sequence[Sequence[complex]], system: Sequence[MPoly], tolerance: float = 1.0e-9) -> List[ResidualRow]:
    """Largest relative residual of the system at each point, flagging points above the tolerance."""
    rows = []
    for point in points:
        residual = 0.0
        for f in system:
            bound = dict(zip(f.ctx.names_with_role(Role.UNKNOWN), (complex(value) for value in point)))
            residual = max(residual, relative_residual(f, bound))
        rows.append(ResidualRow(tuple(complex(value) for value in point), residual, residual > tolerance))
    return rows


def _two_species(model: EquilibriumModel, solver: SolverConfig) -> List[CriticalPoint]:
    x, y = model.species_vars
    restricted = substitute(model.f_affine, {y: 1 - MPoly.var(model.ctx, x)})
    if restricted.is_constant():
        return []
    points = []
    for cluster in complex_roots(restricted, x, solver.tolerances):
        if abs(cluster.value) < solver.tolerances.discard or abs(1 - cluster.value) < solver.tolerances.discard:
            continue
        point = {x: cluster.value, y: 1 - cluster.value}
        residuals = (relative_residual(model.f_affine, point), relative_residual(model.constraint, point))
        points.append(CriticalPoint.of((point[x], point[y]), residuals))
    return points


def _three_species(model: EquilibriumModel, u: Sequence[int], solver: SolverConfig) -> List[CriticalPoint]:
    curve = PlaneCurve.from_model(model)
    found = count_critical_points_variety(curve, u, solver)
    for point in found.ambiguous:
        logging.warning("[%s] Critical point %s lies close to H", model.label, point.coordinates)
    return [CriticalPoint.of(point.coordinates, point.residuals) for point in found.points]


def _independence(model: EquilibriumModel, u: Sequence[int]) -> List[CriticalPoint]:
    """Closed form for x y = z t, read as the 2x2 table with rows (x, z) and (t, y)."""
    n = sum(u)
    rows = (u[0] + u[2], u[3] + u[1])
    columns = (u[0] + u[3], u[2] + u[1])
    estimate = (
        Fraction(rows[0] * columns[0], n * n),
        Fraction(rows[1] * columns[1], n * n),
        Fraction(rows[0] * columns[1], n * n),
        Fraction(rows[1] * columns[0], n * n),
    )
    point = {name: complex(value) for name, value in zip(model.species_vars, estimate)}
    residuals = (relative_residual(model.f_affine, point), relative_residual(model.constraint, point))
    return [CriticalPoint.of(tuple(point.values()), residuals)]


def _segre_chart(model: EquilibriumModel, u: Sequence[int], solver: SolverConfig) -> List[CriticalPoint]:
    """Critical points on the chart (1/K_e, ab, b, a) of P1 x P1."""
    ke: Fraction = model.ke.value  # type: ignore[assignment]
    ctx = VarContext.build(unknowns=("a", "b"))
    a, b = MPoly.var(ctx, "a"), MPoly.var(ctx, "b")
    total = 1 / ke + a * b + a + b
    n = sum(u)
    eq_a = total * (u[1] + u[3]) - a * (b + 1) * n
    eq_b = total * (u[1] + u[2]) - b * (a + 1) * n
    points = []
    for a_value, b_value in solve_bivariate(eq_a, eq_b, ("a", "b"), {}, solver.tolerances):
        chart = (complex(1 / ke), a_value * b_value, b_value, a_value)
        scale = sum(chart)
        if abs(scale) < solver.tolerances.discard:
            continue
        coordinates = tuple(value / scale for value in chart)
        point: Dict[str, complex] = dict(zip(model.species_vars, coordinates))
        bound = {"a": a_value, "b": b_value}
        residuals = (
            relative_residual(model.f_affine, point),
            relative_residual(eq_a, bound),
            relative_residual(eq_b, bound),
        )
        points.append(CriticalPoint.of(coordinates, residuals))
    return points


def maximize_likelihood(model: EquilibriumModel, u: Sequence[int], solver: Optional[SolverConfig] = None) -> MLEResult:
    """Find the critical point of the likelihood in the open simplex where the likelihood is largest."""
    solver = solver or SolverConfig()
    species = len(model.species_vars)
    if len(u) != species:
        raise InvalidCountsError("Expected %d counts, got %d" % (species, len(u)))
    if any(value < 1 for value in u):
        raise InvalidCountsError("Estimation needs every count to be at least 1, got %s" % ",".join(str(value) for value in u))
    if model.ke.value is None or model.ke.value <= 0:
        raise InvalidCountsError("Estimation needs a positive numeric K_e, got %s" % model.ke)
    logging.info("[%s] Maximizing likelihood for counts %s", model.label, ",".join(str(value) for value in u))
    if species == 2:
        candidates = _two_species(model, solver)
    elif species == 3:
        candidates = _three_species(model, u, solver)
    elif detect_shape(model.reaction) == Shape.SEGRE:
        candidates = _independence(model, u) if model.ke.value == 1 else _segre_chart(model, u, solver)
    else:
        raise UnsupportedShapeError("Estimation handles 2 or 3 species and A + B <-> C + D", SUPPORTED_SHAPES)
    positive = [point for point in candidates if point.classification == Classification.POSITIVE]
    if not positive:
        raise NoPositiveCriticalPointError(
            "No critical point of %s lies in the open probability simplex" % model.label,
            [point.coordinates for point in candidates],
        )
    optimum = max(positive, key=lambda point: likelihood_value(point.real, u))
    logging.debug("[%s] %d critical points, optimum %s", model.label, len(candidates), optimum.real)
    if _is_hardy_weinberg(model):
        expected = [float(value) for value in hardy_weinberg_estimate(u)]
        logging.debug("[%s] Hardy-Weinberg deviation %.3g", model.label, max(abs(e - o) for e, o in zip(expected, optimum.real)))
    return MLEResult(optimum, likelihood_value(optimum.real, u), tuple(candidates), len(candidates))


def stationarity_residual(model: EquilibriumModel, u: Sequence[int], point: Sequence[complex]) -> float:
    """Relative residual of the determinant form of the Lagrange condition at a three-species point."""
    _, determinant = variety_critical_system(PlaneCurve.from_model(model), u)
    return relative_residual(determinant, dict(zip(model.species_vars, point)))


def _is_hardy_weinberg(model: EquilibriumModel) -> bool:
    coefficients = [term.coefficient for term in model.reaction.reactants + model.reaction.products]
    return coefficients == [1, 1, 2] and len(model.reaction.reactants) == 2 and model.ke.value == 4
