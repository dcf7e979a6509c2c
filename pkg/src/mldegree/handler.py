# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Request handling shared by the command line and the REST API.
"""
import logging
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from attrs import evolve

from mldegree.catalog import run_catalog
from mldegree.config import SolverConfig, config
from mldegree.curve import CurveReport, PlaneCurve, ml_degree_curve
from mldegree.engine import (
    MLDegreeReport,
    ObservationCounts,
    build_critical_system,
    compute_ml_degree,
    model_points,
    solve_critical_numeric,
)
from mldegree.errors import DegenerateModelError, InvalidCountsError, TheoremInapplicableError, UnsupportedShapeError
from mldegree.model import EquilibriumConstant, EquilibriumModel, MonomialMap, build_model, build_parameterization, dump_model
from mldegree.numeric import maximize_likelihood, residual_report, stationarity_residual
from mldegree.reaction import parse_reaction
from mldegree.records import CatalogRecord, MLDegreeRecord, MLERecord, ModelRecord, NumericCheckRecord, ParseRecord


class Method(str, Enum):
    """How to compute an ML degree."""

    FAITHFUL = "faithful"
    CURVE = "curve"
    BOTH = "both"


def solver_config(seed: Optional[int] = None, tol_residual: Optional[float] = None, tol_cluster: Optional[float] = None) -> SolverConfig:
    """The configured solver settings, with per-run overrides applied to a copy."""
    solver = config().solver
    if seed is not None:
        solver = evolve(solver, seed=seed)
    if tol_residual is not None:
        solver = evolve(solver, tolerances=evolve(solver.tolerances, residual=tol_residual))
    if tol_cluster is not None:
        solver = evolve(solver, tolerances=evolve(solver.tolerances, cluster=tol_cluster))
    return solver


def handle_parse(text: str) -> ParseRecord:
    return ParseRecord.of(parse_reaction(text))


def _model_and_mapping(text: str, ke: EquilibriumConstant) -> Tuple[EquilibriumModel, Optional[MonomialMap]]:
    model = build_model(parse_reaction(text), ke)
    mapping: Optional[MonomialMap] = None
    try:
        mapping = build_parameterization(model)
    except (DegenerateModelError, UnsupportedShapeError) as e:
        logging.info("[%s] No parameterization: %s", model.label, e.message)
    return model, mapping


def handle_model(text: str, ke: EquilibriumConstant) -> ModelRecord:
    """Build the model, with its parameterization when the shape has one."""
    return ModelRecord.of(*_model_and_mapping(text, ke))


def handle_model_dump(text: str, ke: EquilibriumConstant) -> Tuple[List[str], str]:
    """Warnings and the one-item-per-line text dump of the model."""
    model, mapping = _model_and_mapping(text, ke)
    return list(model.warnings), dump_model(model, mapping)


def handle_ml_degree(
    text: str,
    ke: EquilibriumConstant,
    method: Method,
    solver: Optional[SolverConfig] = None,
    counts: Optional[Sequence[int]] = None,
) -> MLDegreeRecord:
    """
    Compute the ML degree with the requested method.

    With both methods, a curve formula that does not apply is noted instead of failing the run.
    The caller decides what to do when the record has no count at all.  When counts are given,
    the faithful count is cross-checked by solving the critical equations numerically.
    """
    solver = solver or solver_config()
    model = build_model(parse_reaction(text), ke)
    report: Optional[MLDegreeReport] = None
    curve: Optional[CurveReport] = None
    notes: List[str] = []
    if method != Method.CURVE:
        report = compute_ml_degree(model)
    if method != Method.FAITHFUL:
        try:
            curve = ml_degree_curve(PlaneCurve.from_model(model), solver)
        except (TheoremInapplicableError, UnsupportedShapeError) as e:
            if method == Method.CURVE:
                raise
            logging.info("[%s] Curve formula not applied: %s", model.label, e.message)
            notes.append("curve formula not applied: %s" % e.message)
    check: Optional[NumericCheckRecord] = None
    if counts is not None:
        if report is None:
            raise InvalidCountsError("Counts are only used to cross-check the faithful count")
        check = _numeric_check(model, counts, report, solver, notes)
    return MLDegreeRecord.of(model, method.value, report, curve, notes, check)


def _numeric_check(
    model: EquilibriumModel, counts: Sequence[int], report: MLDegreeReport, solver: SolverConfig, notes: List[str]
) -> Optional[NumericCheckRecord]:
    if report.parameter_space_count is None:
        notes.append("numeric check skipped: no faithful count")
        return None
    mapping = build_parameterization(model)
    if mapping.is_closed_form:
        notes.append("numeric check skipped: closed-form shape")
        return None
    cs = build_critical_system(mapping, ObservationCounts.symbolic(len(model.species_vars)))
    points = solve_critical_numeric(cs, counts, model.ke, solver.tolerances)
    images = model_points(points, solver.tolerances.cluster)
    rows = residual_report(images, [model.f_affine, model.constraint], solver.tolerances.residual)
    if len(points) != report.parameter_space_count:
        logging.warning(
            "[%s] Numeric check found %d critical points, faithful count is %d", model.label, len(points), report.parameter_space_count
        )
    return NumericCheckRecord.of(counts, report, points, rows)


def handle_mle(text: str, ke: EquilibriumConstant, counts: Sequence[int], solver: Optional[SolverConfig] = None) -> MLERecord:
    solver = solver or solver_config()
    model = build_model(parse_reaction(text), ke)
    result = maximize_likelihood(model, counts, solver)
    rows = residual_report([point.coordinates for point in result.all_critical_points], [model.f_affine, model.constraint], solver.tolerances.residual)
    for row in rows:
        if row.flagged:
            logging.warning("[%s] Critical point %s has model residual %.3g", model.label, row.coordinates, row.residual_max)
    stationarity = stationarity_residual(model, counts, result.optimum.coordinates) if len(model.species_vars) == 3 else None
    return MLERecord.of(model, counts, result, rows, stationarity)


def handle_catalog(solver: Optional[SolverConfig] = None) -> List[CatalogRecord]:
    return [CatalogRecord.of(row) for row in run_catalog(solver or solver_config())]
