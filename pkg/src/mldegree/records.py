# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Serialization records, shared by the command line JSON output and the REST API.
"""
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as metadata_version
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field  # pylint: disable=no-name-in-module:

from mldegree.catalog import CatalogRow
from mldegree.curve import CurveReport
from mldegree.engine import MLDegreeReport, ParameterPoint
from mldegree.model import EquilibriumModel, MonomialMap
from mldegree.numeric import CriticalPoint, MLEResult, ResidualRow
from mldegree.reaction import Reaction, format_reaction, reaction_order


def tool_version() -> str:
    """Installed package version, or 0.0.0 when running from an uninstalled source tree."""
    try:
        return metadata_version("mldegree")
    except PackageNotFoundError:
        return "0.0.0"


def format_number(value: float) -> str:
    return "%.18g" % value


def format_complex(value: complex) -> str:
    """A complex coordinate to 18 significant digits, omitting a zero imaginary part."""
    if value.imag == 0:
        return format_number(value.real)
    sign = "-" if value.imag < 0 else "+"
    return "%s%s%sj" % (format_number(value.real), sign, format_number(abs(value.imag)))


class ParseRecord(BaseModel):
    """A parsed reaction"""

    tool_version: str = Field(default_factory=tool_version)
    reaction: str = Field(...)
    arrow: str = Field(...)
    species: List[str] = Field(...)
    coefficients: List[int] = Field(...)
    order: int = Field(...)

    @staticmethod
    def of(r: Reaction) -> "ParseRecord":
        return ParseRecord(
            reaction=format_reaction(r),
            arrow=r.arrow.value,
            species=r.species(),
            coefficients=[term.coefficient for term in r.reactants + r.products],
            order=reaction_order(r),
        )


class ModelRecord(BaseModel):
    """An equilibrium model with its parameterization"""

    tool_version: str = Field(default_factory=tool_version)
    reaction: str = Field(...)
    ke: str = Field(...)
    species: List[str] = Field(...)
    f_affine: str = Field(...)
    constraint: str = Field(...)
    f_hom: str = Field(...)
    linear_form: str = Field(...)
    shape: Optional[str] = Field(default=None)
    images: List[str] = Field(default_factory=list)
    relation: Optional[str] = Field(default=None)
    warnings: List[str] = Field(default_factory=list)
    normalization: str = Field(...)

    @staticmethod
    def of(model: EquilibriumModel, mapping: Optional[MonomialMap] = None) -> "ModelRecord":
        return ModelRecord(
            reaction=format_reaction(model.reaction),
            ke=str(model.ke),
            species=list(model.species_vars),
            f_affine=str(model.f_affine),
            constraint=str(model.constraint),
            f_hom=str(model.f_hom),
            linear_form=str(model.linear_form),
            shape=mapping.shape.value if mapping else None,
            images=[str(image) for image in mapping.images()] if mapping else [],
            relation=str(mapping.relation) if mapping and mapping.relation else None,
            warnings=list(model.warnings),
            normalization=model.normalization_note,
        )


class CurveRecord(BaseModel):
    """Variety-side ML degree from the plane-curve formula"""

    ml_degree: int = Field(...)
    degree: int = Field(...)
    arrangement_points: Optional[int] = Field(default=None)
    per_line: List[int] = Field(default_factory=list)
    shared_point_correction: Optional[int] = Field(default=None)
    smoothness: str = Field(...)
    caveats: List[str] = Field(default_factory=list)

    @staticmethod
    def of(report: CurveReport) -> "CurveRecord":
        arrangement = report.arrangement
        return CurveRecord(
            ml_degree=report.ml_degree,
            degree=report.degree,
            arrangement_points=arrangement.a if arrangement else None,
            per_line=list(arrangement.per_line_distinct) if arrangement else [],
            shared_point_correction=arrangement.shared_point_correction if arrangement else None,
            smoothness=report.smoothness.value,
            caveats=list(report.caveats),
        )


class FaithfulRecord(BaseModel):
    """Parameter-space ML degree from resultant elimination"""

    shape: str = Field(...)
    parameter_space_count: Optional[int] = Field(default=None)
    fiber_degree: int = Field(...)
    variety_count_quotient: Optional[str] = Field(default=None)
    degeneracy: str = Field(...)
    degeneracy_reason: Optional[str] = Field(default=None)
    eliminant_degree: Optional[int] = Field(default=None)
    eliminant_valuation: Optional[int] = Field(default=None)
    generic_count: Optional[int] = Field(default=None)
    homogenization: str = Field(...)
    caveats: List[str] = Field(default_factory=list)

    @staticmethod
    def of(report: MLDegreeReport) -> "FaithfulRecord":
        return FaithfulRecord(
            shape=report.shape,
            parameter_space_count=report.parameter_space_count,
            fiber_degree=report.fiber_degree,
            variety_count_quotient=None if report.variety_count_quotient is None else str(report.variety_count_quotient),
            degeneracy=report.degeneracy.label,
            degeneracy_reason=report.degeneracy.degenerate,
            eliminant_degree=report.eliminant_degree,
            eliminant_valuation=report.eliminant_valuation,
            generic_count=report.generic_count,
            homogenization=report.homogenization,
            caveats=list(report.caveats),
        )


def compare_methods(report: MLDegreeReport, curve: CurveReport) -> Tuple[str, List[str]]:
    """Agreement between the variety quotient of the faithful count and the curve formula, with notes on any gap."""
    notes: List[str] = []
    quotient = report.variety_count_quotient
    if quotient is None:
        return "divergence: no faithful count, curve count %d" % curve.ml_degree, notes
    if report.parameter_space_count != curve.ml_degree:
        notes.append(
            "parameter-space count %d differs from curve count %d; fiber degree %d"
            % (report.parameter_space_count, curve.ml_degree, report.fiber_degree)
        )
    if quotient == curve.ml_degree:
        return "agreement: variety quotient %s equals curve count %d" % (quotient, curve.ml_degree), notes
    return "divergence: variety quotient %s, curve count %d" % (quotient, curve.ml_degree), notes


class NumericCheckRecord(BaseModel):
    """Numeric critical points for given counts, against the faithful count"""

    u: List[int] = Field(...)
    parameter_points: int = Field(...)
    model_points: int = Field(...)
    unconverged: int = Field(...)
    flagged_model_points: int = Field(...)
    residual_max: float = Field(...)
    matches: bool = Field(...)

    @staticmethod
    def of(u: Sequence[int], report: MLDegreeReport, points: Sequence[ParameterPoint], rows: Sequence[ResidualRow]) -> "NumericCheckRecord":
        return NumericCheckRecord(
            u=list(u),
            parameter_points=len(points),
            model_points=len(rows),
            unconverged=sum(1 for point in points if not point.converged),
            flagged_model_points=sum(1 for row in rows if row.flagged),
            residual_max=max([point.residual_max for point in points] + [row.residual_max for row in rows], default=0.0),
            matches=len(points) == report.parameter_space_count,
        )


class MLDegreeRecord(BaseModel):
    """ML degree of a reaction, from the parameterization, the curve formula or both"""

    tool_version: str = Field(default_factory=tool_version)
    reaction: str = Field(...)
    ke: str = Field(...)
    method: str = Field(...)
    faithful: Optional[FaithfulRecord] = Field(default=None)
    curve: Optional[CurveRecord] = Field(default=None)
    agreement: Optional[str] = Field(default=None)
    numeric: Optional[NumericCheckRecord] = Field(default=None)
    notes: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    @staticmethod
    def of(
        model: EquilibriumModel,
        method: str,
        report: Optional[MLDegreeReport] = None,
        curve: Optional[CurveReport] = None,
        notes: Sequence[str] = (),
        numeric: Optional[NumericCheckRecord] = None,
    ) -> "MLDegreeRecord":
        agreement: Optional[str] = None
        extra: List[str] = []
        if report and curve:
            agreement, extra = compare_methods(report, curve)
        return MLDegreeRecord(
            reaction=format_reaction(model.reaction),
            ke=str(model.ke),
            method=method,
            faithful=FaithfulRecord.of(report) if report else None,
            curve=CurveRecord.of(curve) if curve else None,
            agreement=agreement,
            numeric=numeric,
            notes=list(notes) + extra,
            warnings=list(model.warnings),
        )

    @property
    def has_count(self) -> bool:
        return bool(self.curve) or bool(self.faithful and self.faithful.parameter_space_count is not None)


class CriticalPointRecord(BaseModel):
    """A critical point of the likelihood"""

    coordinates: List[str] = Field(...)
    classification: str = Field(...)
    residual_max: float = Field(...)
    model_residual: Optional[float] = Field(default=None)
    flagged: bool = Field(default=False)

    @staticmethod
    def of(point: CriticalPoint, row: Optional[ResidualRow] = None) -> "CriticalPointRecord":
        return CriticalPointRecord(
            coordinates=[format_complex(value) for value in point.coordinates],
            classification=point.classification.value,
            residual_max=point.residual_max,
            model_residual=row.residual_max if row else None,
            flagged=bool(row and row.flagged),
        )


class MLERecord(BaseModel):
    """Maximum likelihood estimate for observed counts"""

    tool_version: str = Field(default_factory=tool_version)
    reaction: str = Field(...)
    ke: str = Field(...)
    u: List[int] = Field(...)
    optimum: List[str] = Field(...)
    log_likelihood: str = Field(...)
    observed_ml_count: int = Field(...)
    residual_max: float = Field(...)
    stationarity_residual: Optional[float] = Field(default=None)
    critical_points: List[CriticalPointRecord] = Field(default_factory=list)

    @staticmethod
    def of(
        model: EquilibriumModel,
        u: Sequence[int],
        result: MLEResult,
        rows: Sequence[ResidualRow] = (),
        stationarity: Optional[float] = None,
    ) -> "MLERecord":
        checked: List[Optional[ResidualRow]] = list(rows) if rows else [None] * len(result.all_critical_points)
        return MLERecord(
            reaction=format_reaction(model.reaction),
            ke=str(model.ke),
            u=list(u),
            optimum=[format_number(value) for value in result.optimum.real],
            log_likelihood=format_number(result.log_likelihood),
            observed_ml_count=result.observed_ml_count,
            residual_max=result.optimum.residual_max,
            stationarity_residual=stationarity,
            critical_points=[CriticalPointRecord.of(point, row) for point, row in zip(result.all_critical_points, checked)],
        )


class CatalogRecord(BaseModel):
    """One catalog row, computed and expected"""

    tool_version: str = Field(default_factory=tool_version)
    reaction: str = Field(...)
    ke: str = Field(...)
    published_value: int = Field(...)
    status: str = Field(...)
    expected_parameter_count: Optional[int] = Field(default=None)
    parameter_count: Optional[int] = Field(default=None)
    expected_variety_count: Optional[int] = Field(default=None)
    variety_count: Optional[int] = Field(default=None)
    matches: bool = Field(...)
    passed: bool = Field(...)
    note: str = Field(default="")

    @staticmethod
    def of(row: CatalogRow) -> "CatalogRecord":
        entry = row.entry
        return CatalogRecord(
            reaction=entry.reaction_text,
            ke=str(entry.ke),
            published_value=entry.published_value,
            status=entry.status.value,
            expected_parameter_count=entry.expected_parameter_count,
            parameter_count=row.parameter_count,
            expected_variety_count=entry.expected_variety_count,
            variety_count=row.variety_count,
            matches=row.matches,
            passed=row.passed,
            note=entry.note,
        )
