# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
from importlib.metadata import PackageNotFoundError
from unittest.mock import patch

from mldegree.curve import CurveReport, SmoothnessStatus
from mldegree.engine import ParameterPoint, compute_ml_degree
from mldegree.model import EquilibriumConstant, build_model
from mldegree.numeric import ResidualRow
from mldegree.reaction import parse_reaction
from mldegree.records import MLDegreeRecord, NumericCheckRecord, compare_methods, format_complex, format_number, tool_version


def report(text: str, ke: str = "generic"):
    return compute_ml_degree(build_model(parse_reaction(text), EquilibriumConstant.parse(ke)))


def curve_report(ml_degree: int) -> CurveReport:
    return CurveReport(ml_degree, 2, None, SmoothnessStatus.SMOOTH)


class TestFormatting:
    def test_format_number(self):
        assert format_number(0.25) == "0.25"
        assert format_number(0.1) == "0.100000000000000006"

    def test_format_complex(self):
        assert format_complex(0.5 + 0j) == "0.5"
        assert format_complex(1 - 2j) == "1-2j"
        assert format_complex(1 + 0.5j) == "1+0.5j"


class TestToolVersion:
    @patch("mldegree.records.metadata_version")
    def test_installed(self, metadata_version):
        metadata_version.return_value = "1.2.3"
        assert tool_version() == "1.2.3"

    @patch("mldegree.records.metadata_version")
    def test_not_installed(self, metadata_version):
        metadata_version.side_effect = PackageNotFoundError("mldegree")
        assert tool_version() == "0.0.0"


class TestCompareMethods:
    def test_agreement(self):
        agreement, notes = compare_methods(report("A + B <-> 2C", "4"), curve_report(1))
        assert agreement == "agreement: variety quotient 1 equals curve count 1"
        assert notes == ["parameter-space count 2 differs from curve count 1; fiber degree 2"]

    def test_divergence(self):
        agreement, notes = compare_methods(report("A <-> B"), curve_report(3))
        assert agreement == "divergence: variety quotient 1, curve count 3"
        assert len(notes) == 1

    def test_no_faithful_count(self):
        agreement, notes = compare_methods(report("A + B <-> 2C", "0"), curve_report(0))
        assert agreement == "divergence: no faithful count, curve count 0"
        assert not notes


class TestMLDegreeRecord:
    def test_of(self):
        m = build_model(parse_reaction("A + B <-> 2C"), EquilibriumConstant.parse("4"))
        record = MLDegreeRecord.of(m, "both", compute_ml_degree(m), curve_report(1), ["first"])
        assert record.reaction == "A + B <-> 2C"
        assert record.ke == "4"
        assert record.notes[0] == "first"
        assert len(record.notes) == 2
        assert record.faithful.degeneracy == "degenerate"
        assert "count drops from 4 to 2" in record.faithful.degeneracy_reason

    def test_has_count(self):
        m = build_model(parse_reaction("A <-> B"), EquilibriumConstant.generic())
        assert not MLDegreeRecord.of(m, "faithful").has_count
        assert MLDegreeRecord.of(m, "curve", curve=curve_report(0)).has_count


class TestNumericCheckRecord:
    def test_of(self):
        points = [
            ParameterPoint((0.5 + 0j, 0.5 + 0j), 1 + 0j, (0.25 + 0j, 0.25 + 0j, 0.5 + 0j), (1e-15, 2e-15, 0.0)),
            ParameterPoint((-0.5 + 0j, -0.5 + 0j), 1 + 0j, (0.25 + 0j, 0.25 + 0j, 0.5 + 0j), (1e-6, 0.0, 0.0), False),
        ]
        rows = [ResidualRow((0.25 + 0j, 0.25 + 0j, 0.5 + 0j), 3e-16, False)]
        record = NumericCheckRecord.of([30, 30, 40], report("A + B <-> 2C", "4"), points, rows)
        assert record.u == [30, 30, 40]
        assert record.parameter_points == 2
        assert record.model_points == 1
        assert record.unconverged == 1
        assert record.flagged_model_points == 0
        assert record.residual_max == 1e-6
        assert record.matches
