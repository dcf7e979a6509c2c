# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
# pylint: disable=unnecessary-pass:

"""
Shared error types.
"""
from typing import Any, List, Optional, Tuple

from attrs import field, frozen


class MlDegreeError(Exception):
    """Base class for all errors raised by this package."""

    pass


@frozen
class ReactionParseError(MlDegreeError):
    """A reaction equation could not be parsed."""

    message: str
    offset: int


@frozen
class ContextMismatchError(MlDegreeError):
    """Polynomials from different variable contexts were combined."""

    message: str


@frozen
class PolynomialError(MlDegreeError):
    """An operation was applied to a polynomial outside of its domain."""

    message: str


@frozen
class NonExactDivisionError(MlDegreeError):
    """A division that was expected to be exact left a remainder."""

    message: str


@frozen
class UnsupportedShapeError(MlDegreeError):
    """A reaction does not have one of the shapes the elimination procedure handles."""

    message: str
    supported: Tuple[str, ...] = field(factory=tuple, converter=tuple)


@frozen
class DegenerateModelError(MlDegreeError):
    """The model degenerates for the requested equilibrium constant, so no count is available."""

    message: str


@frozen
class TheoremInapplicableError(MlDegreeError):
    """The plane-curve formula does not apply, usually because the curve is singular."""

    message: str
    witness: Optional[Tuple[complex, ...]] = None


@frozen
class ConvergenceError(MlDegreeError):
    """The root finder did not converge."""

    message: str
    residuals: List[float] = field(factory=list)


@frozen
class NoPositiveCriticalPointError(MlDegreeError):
    """No critical point lies in the open probability simplex."""

    message: str
    candidates: List[Any] = field(factory=list)


@frozen
class InvalidCountsError(MlDegreeError):
    """Observed counts do not fit the model or the numeric solver."""

    message: str
