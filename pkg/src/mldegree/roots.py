# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Deterministic numeric root finding for exact univariate polynomials.

Roots are found all at once by Aberth-Ehrlich simultaneous iteration, started from
evenly spaced points on a circle whose radius is the Cauchy bound of the polynomial.
A root is converged when its relative backward error is below the convergence
tolerance, i.e. |f(r)| / sum(|a_i| |r|^i) < tol.

Two-variable systems are reduced to one variable with a resultant, solved, completed
and then polished with Newton steps on the original pair.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from attrs import frozen
from numpy.typing import NDArray

from mldegree.config import ToleranceConfig
from mldegree.errors import ConvergenceError, PolynomialError
from mldegree.poly import (
    MPoly,
    eval_complex,
    from_univariate,
    partial_derivative,
    resultant,
    squarefree_factorization,
    univariate_coefficients,
)

# Angular offset of the starting circle, so that starting points avoid the real axis
_OFFSET = 0.4


@frozen
class RootCluster:
    """A root, with the number of computed roots that fell within the clustering tolerance of it."""

    value: complex
    multiplicity: int


def _float_coefficients(coefficients: Sequence[Union[Fraction, complex]]) -> NDArray[np.complex128]:
    """Scale coefficients so the largest is 1 before converting, to avoid overflow."""
    if all(isinstance(c, Fraction) for c in coefficients):
        largest = max(abs(c) for c in coefficients)
        return np.array([float(c / largest) for c in coefficients], dtype=np.complex128)  # type: ignore[operator]
    values = np.array([complex(c) for c in coefficients], dtype=np.complex128)
    return values / np.max(np.abs(values))


def backward_errors(descending: NDArray[np.complex128], z: NDArray[np.complex128]) -> NDArray[np.float64]:
    """Relative backward error |f(z)| / sum(|a_i| |z|^i) at each point."""
    value = np.abs(np.polyval(descending, z))
    scale = np.polyval(np.abs(descending), np.abs(z))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, value / scale, 0.0)


def aberth(coefficients: Sequence[Union[Fraction, complex]], tolerances: ToleranceConfig) -> List[complex]:
    """All roots of a polynomial with nonzero constant term, given ascending coefficients."""
    descending = _float_coefficients(coefficients)[::-1]
    degree = len(descending) - 1
    derivative = np.polyder(descending)
    bound = 1.0 + float(np.max(np.abs(descending[1:] / descending[0])))
    z = bound * np.exp(1j * (2.0 * np.pi * np.arange(degree) / degree + _OFFSET))
    errors = backward_errors(descending, z)
    for _ in range(tolerances.max_iterations):
        active = errors >= tolerances.convergence
        if not active.any():
            return [complex(root) for root in z]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.polyval(descending, z) / np.polyval(derivative, z)
            difference = z[:, None] - z[None, :]
            np.fill_diagonal(difference, np.inf)
            repulsion = np.sum(1.0 / difference, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = np.where(active, z - step, z)
        errors = backward_errors(descending, z)
    if (errors < tolerances.convergence).all():
        return [complex(root) for root in z]
    raise ConvergenceError(
        "Root finder did not converge after %d iterations" % tolerances.max_iterations,
        [float(error) for error in errors],
    )


def newton_polish(coefficients: Sequence[Union[Fraction, complex]], root: complex, steps: int = 3) -> complex:
    """Refine a simple root with a few Newton steps, keeping the original if a step makes things worse."""
    descending = _float_coefficients(coefficients)[::-1]
    derivative = np.polyder(descending)
    best, best_error = root, float(backward_errors(descending, np.array([root]))[0])
    current = root
    for _ in range(steps):
        slope = complex(np.polyval(derivative, current))
        if slope == 0:
            break
        current = current - complex(np.polyval(descending, current)) / slope
        error = float(backward_errors(descending, np.array([current]))[0])
        if error < best_error:
            best, best_error = current, error
    return best


def cluster_roots(roots: Sequence[complex], tolerance: float) -> List[RootCluster]:
    """Group roots within the tolerance of each other (relative for large roots), summing multiplicities."""
    clusters: List[List[complex]] = []
    for root in sorted(roots, key=lambda r: (r.real, r.imag)):
        for members in clusters:
            center = sum(members) / len(members)
            if abs(root - center) <= tolerance * max(1.0, abs(center)):
                members.append(root)
                break
        else:
            clusters.append([root])
    return [RootCluster(complex(sum(members) / len(members)), len(members)) for members in clusters]


def _variable(f: MPoly, name: Optional[str]) -> str:
    if name:
        return name
    occurring = f.variables()
    if len(occurring) != 1:
        raise PolynomialError("Expected a univariate polynomial, got %s" % f)
    return occurring[0]


def roots_with_multiplicity(f: MPoly, name: Optional[str] = None, tolerances: Optional[ToleranceConfig] = None) -> List[complex]:
    """
    Every complex root of a univariate polynomial, repeated by multiplicity.

    Zero roots are split off exactly, and the rest of the polynomial is split into exact
    squarefree factors first, so multiple roots never reach the iteration.
    """
    tolerances = tolerances or ToleranceConfig()
    variable = _variable(f, name)
    coefficients = univariate_coefficients(f, variable)
    if len(coefficients) < 2:
        raise PolynomialError("Root finding needs degree at least 1: %s" % f)
    valuation = next(i for i, c in enumerate(coefficients) if c != 0)
    reduced = from_univariate(f.ctx, variable, coefficients[valuation:])
    roots = [0j] * valuation
    for factor, multiplicity in squarefree_factorization(reduced, variable):
        exact = univariate_coefficients(factor, variable)
        roots += [newton_polish(exact, root) for root in aberth(exact, tolerances)] * multiplicity
    return roots


def complex_roots(f: MPoly, name: Optional[str] = None, tolerances: Optional[ToleranceConfig] = None) -> List[RootCluster]:
    """All complex roots of a univariate polynomial, clustered, with multiplicities summing to the degree."""
    tolerances = tolerances or ToleranceConfig()
    return cluster_roots(roots_with_multiplicity(f, name, tolerances), tolerances.cluster)


def relative_residual(poly: MPoly, point: Mapping[str, complex]) -> float:
    """|e(p)| / sum over terms of |c p^a|, or 0 when every term vanishes."""
    values = {name: complex(point[name]) for name in poly.variables()}
    total, scale = 0j, 0.0
    for exponent, coefficient in poly.sorted_terms():
        term = complex(float(coefficient))
        for name, power in zip(poly.ctx.names, exponent):
            if power:
                term *= values[name] ** power
        total += term
        scale += abs(term)
    return abs(total) / scale if scale > 0 and math.isfinite(scale) else 0.0


def numeric_roots(coefficients: Sequence[complex], tolerances: Optional[ToleranceConfig] = None) -> List[complex]:
    """
    Roots of a polynomial with floating coefficients, given in ascending order.

    Only exact zeros are trimmed from either end, so the result has one root per power
    between the valuation and the degree, plus the zero roots.
    """
    tolerances = tolerances or ToleranceConfig()
    values = [complex(c) for c in coefficients]
    while values and values[-1] == 0:
        values.pop()
    if len(values) < 2:
        return []
    valuation = next(i for i, c in enumerate(values) if c != 0)
    reduced = values[valuation:]
    found = aberth(reduced, tolerances) if len(reduced) > 1 else []
    return [0j] * valuation + [newton_polish(reduced, root) for root in found]


def coefficients_at(f: MPoly, name: str, point: Mapping[str, complex]) -> List[complex]:
    """Ascending numeric coefficients of f in one variable, with every other variable bound."""
    coefficients = f.coefficients_in(name)
    values = [0j] * (max(coefficients) + 1)
    for power, coefficient in coefficients.items():
        values[power] = eval_complex(coefficient, point)
    return values


def newton_system(
    system: Sequence[MPoly], names: Sequence[str], start: Sequence[complex], constants: Mapping[str, complex], steps: int = 5
) -> Tuple[complex, ...]:
    """Polish a root of a square polynomial system with a few Newton steps."""
    jacobian = [[partial_derivative(f, name) for name in names] for f in system]
    current = np.array(start, dtype=np.complex128)
    for _ in range(steps):
        point = dict(constants)
        point.update(dict(zip(names, (complex(value) for value in current))))
        try:
            values = np.array([eval_complex(f, point) for f in system])
            matrix = np.array([[eval_complex(d, point) for d in row] for row in jacobian])
            with np.errstate(all="ignore"):
                step = np.linalg.solve(matrix, values)
        except (OverflowError, np.linalg.LinAlgError):
            break
        if not np.all(np.isfinite(step)):
            break
        current = current - step
    return tuple(complex(value) for value in current)


def univariate_roots(f: MPoly, name: str, constants: Mapping[str, complex], tolerances: Optional[ToleranceConfig] = None) -> List[complex]:
    """Roots of a polynomial in one variable, exactly factored when its coefficients are rational."""
    if f.variables() == (name,):
        return roots_with_multiplicity(f, name, tolerances)
    return numeric_roots(coefficients_at(f, name, constants), tolerances)


def solve_bivariate(
    p: MPoly,
    q: MPoly,
    names: Tuple[str, str],
    constants: Optional[Mapping[str, complex]] = None,
    tolerances: Optional[ToleranceConfig] = None,
    reduce: Callable[[MPoly], MPoly] = lambda f: f,
) -> List[Tuple[complex, complex]]:
    """
    Common roots of two polynomials in two variables, away from the coordinate axes.

    The first variable is eliminated with a resultant, whose roots give the second
    coordinate.  Each is completed with the roots of p, polished with Newton steps on the
    pair, and kept when both relative residuals are below tolerance.  When no completion
    passes, the best one is still kept if its residual is within the square root of the
    tolerance; otherwise the dropped root is logged.  Points returned are (first, second),
    deduplicated within the clustering tolerance.
    """
    tolerances = tolerances or ToleranceConfig()
    constants = dict(constants or {})
    eliminant = reduce(resultant(p, q, names[0]))
    if eliminant.is_zero():
        raise PolynomialError("Resultant vanishes identically, the polynomials share a common factor")
    solutions: List[Tuple[complex, complex]] = []
    for cluster in cluster_roots(univariate_roots(eliminant, names[1], constants, tolerances), tolerances.cluster):
        b = cluster.value
        if abs(b) < tolerances.discard:
            continue
        partners: List[Tuple[float, Tuple[complex, ...]]] = []
        for a in numeric_roots(coefficients_at(p, names[0], {**constants, names[1]: b}), tolerances):
            if abs(a) < tolerances.discard:
                continue
            candidate = newton_system([p, q], names, (a, b), constants)
            point = {**constants, names[0]: candidate[0], names[1]: candidate[1]}
            try:
                residual = max(relative_residual(p, point), relative_residual(q, point))
            except OverflowError:
                continue
            partners.append((residual, candidate))
        accepted = [candidate for residual, candidate in partners if residual < tolerances.residual]
        if not accepted and partners:
            residual, candidate = min(partners, key=lambda partner: partner[0])
            if residual < math.sqrt(tolerances.residual):
                logging.warning("Keeping common root %s with residual %.3g above tolerance %.3g", candidate, residual, tolerances.residual)
                accepted = [candidate]
            else:
                logging.warning("Dropping eliminant root %s: best completion has residual %.3g", b, residual)
        for candidate in accepted:
            scale = max(1.0, abs(candidate[0]), abs(candidate[1]))
            if any(max(abs(candidate[0] - x), abs(candidate[1] - y)) <= tolerances.cluster * scale for x, y in solutions):
                continue
            solutions.append((candidate[0], candidate[1]))
    return solutions
