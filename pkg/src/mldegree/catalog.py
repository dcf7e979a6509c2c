# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Catalog of reactions with known ML degrees, and the regression run over it.
"""
import csv
import io
import logging
from enum import Enum
from typing import List, Optional

import importlib_resources
from attrs import field, frozen

from mldegree.config import SolverConfig
from mldegree.curve import PlaneCurve, ml_degree_curve
from mldegree.engine import MLDegreeReport, compute_ml_degree
from mldegree.errors import MlDegreeError
from mldegree.model import EquilibriumConstant, build_model
from mldegree.reaction import format_reaction, parse_reaction

CATALOG = "catalog.tsv"
NOT_APPLICABLE = "n/a"


class Status(str, Enum):
    CONFIRMED = "confirmed"
    DISCREPANCY_DOCUMENTED = "discrepancy_documented"


def _optional_count(value: str) -> Optional[int]:
    return None if value == NOT_APPLICABLE else int(value)


@frozen
class CatalogEntry:
    """A reaction with its published ML degree and the counts this package is expected to compute."""

    reaction_text: str
    ke: EquilibriumConstant
    published_value: int
    status: Status
    expected_parameter_count: Optional[int]
    expected_variety_count: Optional[int]
    note: str = ""

    def __attrs_post_init__(self) -> None:
        if self.status == Status.DISCREPANCY_DOCUMENTED and not self.note:
            raise ValueError("Catalog entry %s has a documented discrepancy without a note" % self.reaction_text)

    @property
    def label(self) -> str:
        return "%s, K_e=%s" % (self.reaction_text, self.ke)


@frozen
class CatalogRow:
    """Computed values for one catalog entry."""

    entry: CatalogEntry
    parameter_count: Optional[int]
    variety_count: Optional[int]
    report: Optional[MLDegreeReport] = None
    caveats: List[str] = field(factory=list)

    @property
    def matches(self) -> bool:
        expected = [(self.entry.expected_parameter_count, self.parameter_count), (self.entry.expected_variety_count, self.variety_count)]
        return all(want is None or want == got for want, got in expected)

    @property
    def passed(self) -> bool:
        return self.matches or self.entry.status == Status.DISCREPANCY_DOCUMENTED


def _parse_entry(row: List[str]) -> CatalogEntry:
    reaction, ke, published_value, status, parameter_count, variety_count, note = row
    return CatalogEntry(
        reaction_text=reaction,
        ke=EquilibriumConstant.parse(ke),
        published_value=int(published_value),
        status=Status(status),
        expected_parameter_count=_optional_count(parameter_count),
        expected_variety_count=_optional_count(variety_count),
        note=note,
    )


def load_catalog() -> List[CatalogEntry]:
    """Load the packaged catalog, in file order."""
    source = importlib_resources.files("mldegree.data").joinpath(CATALOG).read_text(encoding="utf8")
    rows = list(csv.reader(io.StringIO(source), delimiter="\t"))
    return [_parse_entry(row) for row in rows[1:] if row]


def lookup(reaction_text: str, ke: Optional[EquilibriumConstant] = None) -> Optional[CatalogEntry]:
    """Find an entry by reaction, in any spacing, and optionally by equilibrium constant."""
    wanted = format_reaction(parse_reaction(reaction_text))
    for entry in load_catalog():
        if format_reaction(parse_reaction(entry.reaction_text)) == wanted and (ke is None or entry.ke == ke):
            return entry
    return None


def run_entry(entry: CatalogEntry, solver: Optional[SolverConfig] = None) -> CatalogRow:
    """Compute the parameter-space count, and the curve-side count where one is expected."""
    solver = solver or SolverConfig()
    model = build_model(parse_reaction(entry.reaction_text), entry.ke)
    report = compute_ml_degree(model)
    caveats = list(report.caveats)
    variety_count = None
    if entry.expected_variety_count is not None:
        try:
            variety_count = ml_degree_curve(PlaneCurve.from_model(model), solver).ml_degree
        except MlDegreeError as e:
            caveats.append(getattr(e, "message", str(e)))
    row = CatalogRow(entry, report.parameter_space_count, variety_count, report, caveats)
    if not row.matches:
        log = logging.info if row.passed else logging.error
        log("[%s] Expected %s/%s, computed %s/%s", entry.label, entry.expected_parameter_count, entry.expected_variety_count, row.parameter_count, variety_count)
    return row


def run_catalog(solver: Optional[SolverConfig] = None) -> List[CatalogRow]:
    """Run every catalog entry in catalog order."""
    return [run_entry(entry, solver) for entry in load_catalog()]
