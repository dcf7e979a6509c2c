# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Variety-side ML degree of a three-species model, treated as a plane curve.

A smooth plane curve X of degree d has ML degree d^2 - 3d + a, where a is the number of
distinct points where X meets the arrangement H of the four lines x = 0, y = 0, z = 0
and L = x + y + z = 0.  The count of a is exact: each line restricts F to a binary
form whose distinct roots are counted with a squarefree part, and the six points lying
on two of the lines are counted once.

Independently, the critical points can be found numerically from F and the 3x3
determinant that expresses the Lagrange condition in variety coordinates.
"""
import logging
import random
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from attrs import field, frozen

from mldegree.config import SolverConfig, ToleranceConfig
from mldegree.errors import DegenerateModelError, PolynomialError, TheoremInapplicableError, UnsupportedShapeError
from mldegree.model import KE, SUPPORTED_SHAPES, EquilibriumModel
from mldegree.poly import (
    MPoly,
    PolyMatrix,
    Role,
    determinant_fraction_free,
    partial_derivative,
    resultant,
    squarefree_part,
    substitute,
    univariate_gcd,
)
from mldegree.roots import relative_residual, roots_with_multiplicity, solve_bivariate

Point = Tuple[complex, complex, complex]


class Line(str, Enum):
    """Lines of the distinguished arrangement."""

    X = "x"
    Y = "y"
    Z = "z"
    L = "L"


# The six points lying on two lines of the arrangement, with the lines they lie on
SHARED_POINTS: Tuple[Tuple[Tuple[int, int, int], Tuple[Line, Line]], ...] = (
    ((1, 0, 0), (Line.Y, Line.Z)),
    ((0, 1, 0), (Line.X, Line.Z)),
    ((0, 0, 1), (Line.X, Line.Y)),
    ((0, 1, -1), (Line.X, Line.L)),
    ((1, 0, -1), (Line.Y, Line.L)),
    ((1, -1, 0), (Line.Z, Line.L)),
)

NON_REDUCED_NOTE = "the curve is not reduced; its ML degree is taken as 0, as for the K_e = 0 model"


def _form_degree(f: MPoly, names: Sequence[str]) -> int:
    indices = [f.ctx.index(name) for name in names]
    return max(sum(exponent[i] for i in indices) for exponent in f.terms)


@frozen
class PlaneCurve:
    """A homogeneous polynomial in three unknowns, possibly with K_e as a constant."""

    f_hom: MPoly
    names: Tuple[str, str, str] = field(init=False)
    degree: int = field(init=False)

    @names.default
    def _names(self) -> Tuple[str, str, str]:
        unknowns = self.f_hom.ctx.names_with_role(Role.UNKNOWN)
        if len(unknowns) != 3:
            raise UnsupportedShapeError("Plane curves need exactly 3 species, got %d" % len(unknowns), SUPPORTED_SHAPES)
        return unknowns[0], unknowns[1], unknowns[2]

    @degree.default
    def _degree(self) -> int:
        if self.f_hom.is_zero():
            raise PolynomialError("The zero polynomial does not define a curve")
        return _form_degree(self.f_hom, self.names)

    def __attrs_post_init__(self) -> None:
        indices = [self.f_hom.ctx.index(name) for name in self.names]
        if len({sum(exponent[i] for i in indices) for exponent in self.f_hom.terms}) != 1:
            raise PolynomialError("Curve polynomial is not homogeneous: %s" % self.f_hom)

    @staticmethod
    def from_model(model: EquilibriumModel) -> "PlaneCurve":
        return PlaneCurve(model.f_hom)

    @property
    def is_generic(self) -> bool:
        return KE in self.f_hom.variables()

    def specialize(self, value: Fraction) -> "PlaneCurve":
        return PlaneCurve(substitute(self.f_hom, {KE: value}))

    def samples(self, solver: SolverConfig) -> List["PlaneCurve"]:
        """The curve itself, or seeded rational specializations of a generic K_e."""
        if not self.is_generic:
            return [self]
        rng = random.Random(solver.seed)
        return [self.specialize(Fraction(rng.randint(1, 10**6), rng.randint(1, 997))) for _ in range(solver.generic_samples)]

    def gradient(self) -> Tuple[MPoly, MPoly, MPoly]:
        x, y, z = self.names
        return partial_derivative(self.f_hom, x), partial_derivative(self.f_hom, y), partial_derivative(self.f_hom, z)


@frozen
class ArrangementCount:
    """Distinct points of the curve on the arrangement of four lines."""

    per_line_distinct: Tuple[int, int, int, int]
    shared_point_correction: int
    a: int
    skipped_lines: Tuple[str, ...] = ()

    def __attrs_post_init__(self) -> None:
        if self.a != sum(self.per_line_distinct) - self.shared_point_correction or self.a < 0:
            raise PolynomialError("Inconsistent arrangement count")


class SmoothnessStatus(str, Enum):
    SMOOTH = "smooth"
    SINGULAR = "singular"
    UNDETERMINED = "undetermined"


@frozen
class Smoothness:
    """Result of a smoothness check, with a singular point when one was confirmed."""

    status: SmoothnessStatus
    witness: Optional[Point] = None
    non_reduced: bool = False


@frozen
class CurveReport:
    """Variety-side ML degree from the plane-curve formula."""

    ml_degree: int
    degree: int
    arrangement: Optional[ArrangementCount]
    smoothness: SmoothnessStatus
    caveats: Tuple[str, ...] = ()


@frozen
class VarietyPoint:
    """A critical point in variety coordinates, scaled to sum 1."""

    coordinates: Point
    residuals: Tuple[float, float]

    @property
    def residual_max(self) -> float:
        return max(self.residuals)


@frozen
class VarietyCount:
    """Numeric critical points of the likelihood on a plane curve, off the arrangement."""

    count: int
    points: Tuple[VarietyPoint, ...]
    ambiguous: Tuple[VarietyPoint, ...] = ()


def restrict_to_line(c: PlaneCurve, line: Line) -> MPoly:
    """Restrict F to a line of the arrangement, giving a binary form in the two remaining coordinates."""
    x, y, z = c.names
    if line == Line.L:
        restricted = substitute(c.f_hom, {z: -MPoly.var(c.f_hom.ctx, x) - MPoly.var(c.f_hom.ctx, y)})
    else:
        restricted = substitute(c.f_hom, {c.names["xyz".index(line.value)]: 0})
    if restricted.is_zero():
        raise DegenerateModelError("Curve is reducible against H: it contains the line %s = 0" % line.value)
    return restricted


def distinct_projective_roots(form: MPoly, names: Tuple[str, str], degree: int) -> int:
    """Number of distinct points (a:b) where a binary form of the given degree vanishes."""
    affine = substitute(form, {names[1]: 1})
    if affine.is_zero():
        raise PolynomialError("Binary form vanishes identically")
    finite = 0 if affine.is_constant() else squarefree_part(affine, names[0]).degree_in(names[0])
    top = 0 if affine.is_constant() else affine.degree_in(names[0])
    return finite + (1 if top < degree else 0)


def _line_variables(c: PlaneCurve, line: Line) -> Tuple[str, str]:
    x, y, z = c.names
    return {Line.X: (y, z), Line.Y: (x, z), Line.Z: (x, y), Line.L: (x, y)}[line]


def _vanishes_at(c: PlaneCurve, point: Tuple[int, int, int]) -> bool:
    return substitute(c.f_hom, dict(zip(c.names, point))).is_zero()


def _arrangement(c: PlaneCurve) -> ArrangementCount:
    counts: List[int] = []
    skipped: List[Line] = []
    for line in Line:
        try:
            counts.append(distinct_projective_roots(restrict_to_line(c, line), _line_variables(c, line), c.degree))
        except DegenerateModelError:
            skipped.append(line)
            counts.append(0)
    correction = 0
    for point, lines in SHARED_POINTS:
        if _vanishes_at(c, point) and not any(line in skipped for line in lines):
            correction += 1
    total = sum(counts) - correction
    return ArrangementCount((counts[0], counts[1], counts[2], counts[3]), correction, total, tuple(line.value for line in skipped))


def arrangement_count(c: PlaneCurve, solver: Optional[SolverConfig] = None) -> ArrangementCount:
    """
    Count a, the distinct points of the curve on the arrangement.

    Lines contained in the curve are skipped, and shared points are corrected only between
    lines that were counted.  For a generic K_e the count is the largest over seeded rational
    specializations, since distinct-root counts can only drop at special values.
    """
    solver = solver or SolverConfig()
    counts = [_arrangement(sample) for sample in c.samples(solver)]
    return max(counts, key=lambda count: count.a)


def _normalize(point: Sequence[complex]) -> Point:
    """Scale a projective point so its first coordinate of largest magnitude is 1."""
    largest = max(abs(value) for value in point)
    pivot = next(value for value in point if abs(value) >= largest * (1 - 1e-12))
    return point[0] / pivot, point[1] / pivot, point[2] / pivot


def _random_line(c: PlaneCurve, rng: random.Random) -> Tuple[MPoly, Fraction, Fraction]:
    x, y, z = c.names
    ctx = c.f_hom.ctx
    alpha = Fraction(rng.randint(-1000, 1000), rng.randint(1, 97))
    beta = Fraction(rng.randint(-1000, 1000), rng.randint(1, 97))
    form = substitute(c.f_hom, {z: alpha * MPoly.var(ctx, x) + beta * MPoly.var(ctx, y)})
    return form, alpha, beta


def _non_reduced_witness(c: PlaneCurve, solver: SolverConfig) -> Optional[Point]:
    """A multiple point on random lines, when all of them meet the curve with multiplicity."""
    x, y, _ = c.names
    rng = random.Random(solver.seed)
    witness: Optional[Point] = None
    for _ in range(3):
        form, alpha, beta = _random_line(c, rng)
        if form.is_zero():
            return None
        if distinct_projective_roots(form, (x, y), c.degree) == c.degree:
            return None
        if witness is None:
            affine = substitute(form, {y: 1})
            double = univariate_gcd(affine, partial_derivative(affine, x), x) if not affine.is_constant() else affine
            if double.is_constant():
                witness = _normalize((1, 0, complex(alpha)))
            else:
                root = roots_with_multiplicity(double, x)[0]
                witness = _normalize((root, 1, complex(alpha) * root + complex(beta)))
    return witness


def _projection(polys: Sequence[MPoly], keep: str, drop: str) -> Optional[MPoly]:
    """Gcd of the resultants eliminating one variable, a univariate polynomial every common zero projects onto."""
    projected: List[MPoly] = []
    with_drop = [p for p in polys if drop in p.variables()]
    projected += [p for p in polys if drop not in p.variables() and not p.is_zero()]
    for i, first in enumerate(with_drop):
        for second in with_drop[i + 1 :]:
            value = resultant(first, second, drop)
            if not value.is_zero():
                projected.append(value)
    if not projected:
        return None
    common = projected[0]
    for value in projected[1:]:
        common = univariate_gcd(common, value, keep)
    return common


def _patch_check(c: PlaneCurve, patch: str, tolerance: float) -> Tuple[bool, Optional[Point]]:
    """Whether a patch is free of singular points, and a confirmed singular point if one is found."""
    a, b = [name for name in c.names if name != patch]
    polys = [substitute(p, {patch: 1}) for p in (c.f_hom,) + c.gradient()]
    polys = [p for p in polys if not p.is_zero()]
    if any(p.is_constant() for p in polys):
        return True, None
    in_a, in_b = _projection(polys, a, b), _projection(polys, b, a)
    if (in_a is not None and in_a.is_constant()) or (in_b is not None and in_b.is_constant()):
        return True, None
    if in_a is None or in_b is None:
        return False, None
    for root_a in set(roots_with_multiplicity(squarefree_part(in_a, a), a)):
        for root_b in set(roots_with_multiplicity(squarefree_part(in_b, b), b)):
            point = {a: root_a, b: root_b, patch: 1 + 0j}
            if max(relative_residual(p, point) for p in (c.f_hom,) + c.gradient()) < tolerance:
                return False, _normalize(tuple(point[name] for name in c.names))
    return False, None


def smoothness_check(c: PlaneCurve, solver: Optional[SolverConfig] = None) -> Smoothness:
    """Search for common projective zeros of F and its partial derivatives."""
    solver = solver or SolverConfig()
    sample = c.samples(solver)[0]
    witness = _non_reduced_witness(sample, solver)
    if witness is not None:
        return Smoothness(SmoothnessStatus.SINGULAR, witness, non_reduced=True)
    clean = True
    for patch in reversed(sample.names):
        patch_clean, witness = _patch_check(sample, patch, solver.tolerances.singular)
        if witness is not None:
            return Smoothness(SmoothnessStatus.SINGULAR, witness)
        clean = clean and patch_clean
    return Smoothness(SmoothnessStatus.SMOOTH if clean else SmoothnessStatus.UNDETERMINED)


def ml_degree_curve(c: PlaneCurve, solver: Optional[SolverConfig] = None) -> CurveReport:
    """ML degree d^2 - 3d + a of a smooth plane curve."""
    solver = solver or SolverConfig()
    smoothness = smoothness_check(c, solver)
    if smoothness.non_reduced:
        logging.info("Curve %s is not reduced, taking ML degree 0", c.f_hom)
        return CurveReport(0, c.degree, None, smoothness.status, (NON_REDUCED_NOTE,))
    if smoothness.status == SmoothnessStatus.SINGULAR:
        raise TheoremInapplicableError("The plane-curve formula needs a smooth curve, %s is singular" % c.f_hom, smoothness.witness)
    if smoothness.status == SmoothnessStatus.UNDETERMINED:
        raise TheoremInapplicableError("Smoothness of %s could not be confirmed" % c.f_hom)
    arrangement = arrangement_count(c, solver)
    caveats = []
    if c.is_generic:
        caveats.append("generic K_e: arrangement counted over %d rational specializations" % solver.generic_samples)
    d = c.degree
    result = d * d - 3 * d + arrangement.a
    logging.debug("Curve %s: d=%d, a=%d, ML degree %d", c.f_hom, d, arrangement.a, result)
    return CurveReport(result, d, arrangement, smoothness.status, tuple(caveats))


def variety_critical_system(c: PlaneCurve, u: Sequence[int]) -> Tuple[MPoly, MPoly]:
    """F and the determinant of rows (1, 1, 1), (u0 y z, u1 x z, u2 x y) and the gradient of F."""
    if len(u) != 3:
        raise PolynomialError("Expected 3 counts, got %d" % len(u))
    ctx = c.f_hom.ctx
    x, y, z = (MPoly.var(ctx, name) for name in c.names)
    one = MPoly.constant(ctx, 1)
    rows = [
        [one, one, one],
        [y * z * u[0], x * z * u[1], x * y * u[2]],
        list(c.gradient()),
    ]
    return c.f_hom, determinant_fraction_free(PolyMatrix(rows))


def count_critical_points_variety(c: PlaneCurve, u: Sequence[int], solver: Optional[SolverConfig] = None) -> VarietyCount:
    """Numerically solve the variety critical system, keeping points off the arrangement."""
    solver = solver or SolverConfig()
    tolerances: ToleranceConfig = solver.tolerances
    if c.is_generic:
        raise PolynomialError("Counting critical points needs a numeric K_e")
    if any(value < 1 for value in u):
        raise PolynomialError("Counting critical points needs positive counts")
    smoothness = smoothness_check(c, solver)
    if smoothness.non_reduced:
        raise DegenerateModelError("Curve %s is not reduced" % c.f_hom)
    f, determinant = variety_critical_system(c, u)
    x, y, z = c.names
    pair = solve_bivariate(substitute(f, {z: 1}), substitute(determinant, {z: 1}), (y, x), {}, tolerances)
    points: List[VarietyPoint] = []
    ambiguous: List[VarietyPoint] = []
    for y_value, x_value in pair:
        projective = _normalize((x_value, y_value, 1 + 0j))
        distances = [abs(value) for value in projective] + [abs(sum(projective))]
        if min(distances) < tolerances.discard:
            continue
        if smoothness.witness is not None:
            witness = smoothness.witness
            if max(abs(p - w) for p, w in zip(projective, witness)) < tolerances.cluster:
                continue
        total = sum(projective)
        coordinates: Point = (projective[0] / total, projective[1] / total, projective[2] / total)
        bound: Dict[str, complex] = dict(zip(c.names, coordinates))
        residuals = (relative_residual(f, bound), relative_residual(determinant, bound))
        if max(residuals) >= tolerances.residual:
            logging.warning("Dropping point %s of %s: residual %.3g after scaling to sum 1", coordinates, c.f_hom, max(residuals))
            continue
        if any(max(abs(p - q) for p, q in zip(coordinates, other.coordinates)) < tolerances.cluster for other in points):
            continue
        point = VarietyPoint(coordinates, residuals)
        points.append(point)
        if min(distances) < 10 * tolerances.discard:
            ambiguous.append(point)
    if len(points) > c.degree * (c.degree + 1):
        raise PolynomialError("Found %d critical points, more than the Bezout bound %d" % (len(points), c.degree * (c.degree + 1)))
    logging.debug("Curve %s with counts %s: %d critical points", c.f_hom, list(u), len(points))
    return VarietyCount(len(points), tuple(points), tuple(ambiguous))
