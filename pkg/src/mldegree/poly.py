# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:
# pylint: disable=too-many-public-methods:

"""
Exact multivariate polynomials over the rationals.

Polynomials are stored as a map from exponent vectors to nonzero Fraction coefficients,
relative to a VarContext that names the variables and tags each with a role.  Term
order is graded lexicographic everywhere, with variables earlier in the context
ranking higher.  There is no floating point anywhere in this module except for
eval_complex(), which is only used for residual checks.

The elimination machinery (Sylvester matrices, Bareiss determinants, resultants) works
on polynomials regarded as univariate in one variable with polynomial coefficients, so
all intermediate values stay inside the same context.
"""
from __future__ import annotations  # so we can return a type from one of its own methods

import re
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from attrs import field, frozen

from mldegree.errors import ContextMismatchError, NonExactDivisionError, PolynomialError

Exponent = Tuple[int, ...]
Rational = Union[int, Fraction]


class Role(str, Enum):
    """Role of a symbol in a variable context."""

    UNKNOWN = "unknown"
    LAGRANGE = "lagrange"
    COUNT = "count"
    CONSTANT = "constant"


@frozen
class Symbol:
    """A named symbol with a role."""

    name: str
    role: Role = Role.UNKNOWN


def _validate_symbols(_instance: object, _attribute: object, value: Tuple[Symbol, ...]) -> None:
    names = [symbol.name for symbol in value]
    if len(set(names)) != len(names):
        raise PolynomialError("Variable names must be distinct: %s" % ", ".join(names))
    if len([symbol for symbol in value if symbol.role == Role.LAGRANGE]) > 1:
        raise PolynomialError("At most one Lagrange symbol is allowed in a context")


@frozen
class VarContext:
    """Ordered list of distinct symbols that a polynomial's exponent vectors refer to."""

    symbols: Tuple[Symbol, ...] = field(converter=tuple, validator=_validate_symbols)

    @staticmethod
    def build(
        unknowns: Iterable[str] = (),
        lagrange: Optional[str] = None,
        counts: Iterable[str] = (),
        constants: Iterable[str] = (),
    ) -> VarContext:
        """Build a context with the variables grouped by role, in that order."""
        symbols = [Symbol(name, Role.UNKNOWN) for name in unknowns]
        symbols += [Symbol(lagrange, Role.LAGRANGE)] if lagrange else []
        symbols += [Symbol(name, Role.COUNT) for name in counts]
        symbols += [Symbol(name, Role.CONSTANT) for name in constants]
        return VarContext(symbols)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(symbol.name for symbol in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError as e:
            raise PolynomialError("Unknown variable: %s" % name) from e

    def role(self, name: str) -> Role:
        return self.symbols[self.index(name)].role

    def names_with_role(self, role: Role) -> Tuple[str, ...]:
        return tuple(symbol.name for symbol in self.symbols if symbol.role == role)

    def without(self, names: Iterable[str]) -> VarContext:
        """Return a context with the named variables removed."""
        removed = set(names)
        return VarContext([symbol for symbol in self.symbols if symbol.name not in removed])


def _glex_key(exponent: Exponent) -> Tuple[int, Exponent]:
    return sum(exponent), exponent


def _format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else "%d/%d" % (value.numerator, value.denominator)


class MPoly:
    """A multivariate polynomial with exact rational coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VarContext, terms: Optional[Mapping[Exponent, Rational]] = None) -> None:
        self.ctx = ctx
        self.terms: Dict[Exponent, Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            if len(exponent) != len(ctx):
                raise PolynomialError("Exponent vector %s does not match context of length %d" % (exponent, len(ctx)))
            if any(e < 0 for e in exponent):
                raise PolynomialError("Negative exponent in %s" % (exponent,))
            if coefficient != 0:
                self.terms[tuple(exponent)] = Fraction(coefficient)

    @staticmethod
    def zero(ctx: VarContext) -> MPoly:
        return MPoly(ctx)

    @staticmethod
    def constant(ctx: VarContext, value: Rational) -> MPoly:
        return MPoly(ctx, {(0,) * len(ctx): value})

    @staticmethod
    def var(ctx: VarContext, name: str, power: int = 1) -> MPoly:
        exponent = [0] * len(ctx)
        exponent[ctx.index(name)] = power
        return MPoly(ctx, {tuple(exponent): 1})

    @staticmethod
    def monomial(ctx: VarContext, coefficient: Rational, powers: Mapping[str, int]) -> MPoly:
        exponent = [0] * len(ctx)
        for name, power in powers.items():
            exponent[ctx.index(name)] += power
        return MPoly(ctx, {tuple(exponent): coefficient})

    @staticmethod
    def parse(ctx: VarContext, text: str) -> MPoly:
        """Parse the canonical text rendering, e.g. "3/2*x^2*y - K_e*z + 1"."""
        source = text.replace(" ", "")
        if not source:
            raise PolynomialError("Empty polynomial text")
        result = MPoly.zero(ctx)
        for sign, body in re.findall(r"([+-]?)([^+-]+)", source):
            term = MPoly.constant(ctx, -1 if sign == "-" else 1)
            for factor in body.split("*"):
                match = re.fullmatch(r"(\d+)(?:/(\d+))?", factor)
                if match:
                    term = term * Fraction(int(match.group(1)), int(match.group(2) or 1))
                    continue
                match = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
                if not match:
                    raise PolynomialError("Unparseable factor '%s' in '%s'" % (factor, text))
                term = term * MPoly.var(ctx, match.group(1), int(match.group(2) or 1))
            result = result + term
        return result

    def _coerce(self, other: Union[MPoly, Rational]) -> MPoly:
        if isinstance(other, MPoly):
            if other.ctx != self.ctx:
                raise ContextMismatchError("Context mismatch: %s vs %s" % (self.ctx.names, other.ctx.names))
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(self.ctx, other)
        return NotImplemented  # type: ignore[unreachable]

    def __add__(self, other: Union[MPoly, Rational]) -> MPoly:
        other = self._coerce(other)
        terms = dict(self.terms)
        for exponent, coefficient in other.terms.items():
            terms[exponent] = terms.get(exponent, Fraction(0)) + coefficient
        return MPoly(self.ctx, terms)

    def __radd__(self, other: Rational) -> MPoly:
        return self + other

    def __neg__(self) -> MPoly:
        return MPoly(self.ctx, {exponent: -coefficient for exponent, coefficient in self.terms.items()})

    def __sub__(self, other: Union[MPoly, Rational]) -> MPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Rational) -> MPoly:
        return self._coerce(other) - self

    def __mul__(self, other: Union[MPoly, Rational]) -> MPoly:
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                terms[exponent] = terms.get(exponent, Fraction(0)) + c1 * c2
        return MPoly(self.ctx, terms)

    def __rmul__(self, other: Rational) -> MPoly:
        return self * other

    def __pow__(self, power: int) -> MPoly:
        if power < 0:
            raise PolynomialError("Negative powers are not polynomials")
        result = MPoly.constant(self.ctx, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.constant(self.ctx, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ctx, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return "MPoly(%s)" % self

    def __str__(self) -> str:
        return self.to_text()

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exponent) for exponent in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolynomialError("Polynomial is not constant: %s" % self)
        return self.terms.get((0,) * len(self.ctx), Fraction(0))

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        """Terms in descending graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda item: _glex_key(item[0]), reverse=True)

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        if self.is_zero():
            raise PolynomialError("The zero polynomial has no leading term")
        exponent = max(self.terms, key=_glex_key)
        return exponent, self.terms[exponent]

    def total_degree(self) -> int:
        if self.is_zero():
            raise PolynomialError("The zero polynomial has no degree")
        return max(sum(exponent) for exponent in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(exponent) for exponent in self.terms}) <= 1

    def variables(self) -> Tuple[str, ...]:
        """Names of the variables that actually occur."""
        return tuple(name for i, name in enumerate(self.ctx.names) if any(exponent[i] for exponent in self.terms))

    def coefficients_in(self, name: str) -> Dict[int, MPoly]:
        """View the polynomial as univariate in one variable, with polynomial coefficients."""
        i = self.ctx.index(name)
        grouped: Dict[int, Dict[Exponent, Fraction]] = {}
        for exponent, coefficient in self.terms.items():
            stripped = exponent[:i] + (0,) + exponent[i + 1 :]
            grouped.setdefault(exponent[i], {})[stripped] = coefficient
        return {power: MPoly(self.ctx, terms) for power, terms in grouped.items()}

    def degree_in(self, name: str) -> int:
        return degree_profile(self, name)[0]

    def in_context(self, ctx: VarContext) -> MPoly:
        """Re-express this polynomial in another context that names every variable it uses."""
        if ctx == self.ctx:
            return self
        mapping = []
        for name in self.variables():
            if name not in ctx:
                raise ContextMismatchError("Variable %s is not available in context %s" % (name, ctx.names))
            mapping.append((self.ctx.index(name), ctx.index(name)))
        terms = {}
        for exponent, coefficient in self.terms.items():
            target = [0] * len(ctx)
            for source, destination in mapping:
                target[destination] = exponent[source]
            terms[tuple(target)] = coefficient
        return MPoly(ctx, terms)

    def to_text(self) -> str:
        """Canonical rendering, graded lexicographic with explicit ^ and *."""
        if self.is_zero():
            return "0"
        rendered = []
        for exponent, coefficient in self.sorted_terms():
            factors = []
            for name, power in zip(self.ctx.names, exponent):
                if power == 1:
                    factors.append(name)
                elif power > 1:
                    factors.append("%s^%d" % (name, power))
            magnitude = abs(coefficient)
            if not factors:
                body = _format_rational(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_format_rational(magnitude)] + factors)
            if not rendered:
                rendered.append("-" + body if coefficient < 0 else body)
            else:
                rendered.append(("- " if coefficient < 0 else "+ ") + body)
        return " ".join(rendered)


def _require_same_context(a: MPoly, b: MPoly) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatchError("Context mismatch: %s vs %s" % (a.ctx.names, b.ctx.names))


def arith(op: str, a: MPoly, b: Optional[MPoly] = None) -> MPoly:
    """Exact ring arithmetic: op is one of add, sub, mul, neg."""
    if op == "neg":
        return -a
    if b is None:
        raise PolynomialError("Operation %s needs two operands" % op)
    _require_same_context(a, b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PolynomialError("Unknown operation: %s" % op)


def partial_derivative(a: MPoly, name: str) -> MPoly:
    """Formal partial derivative with respect to a variable."""
    i = a.ctx.index(name)
    terms = {}
    for exponent, coefficient in a.terms.items():
        if exponent[i] > 0:
            lowered = exponent[:i] + (exponent[i] - 1,) + exponent[i + 1 :]
            terms[lowered] = coefficient * exponent[i]
    return MPoly(a.ctx, terms)


def substitute(a: MPoly, bindings: Mapping[str, Union[MPoly, Rational]]) -> MPoly:
    """
    Simultaneously substitute polynomials or rationals for variables.

    Binding values are interpreted in the polynomial's own context.  The result lives in the
    context reduced by every bound variable that no binding value refers to.
    """
    values: Dict[int, MPoly] = {}
    for name, value in bindings.items():
        index = a.ctx.index(name)
        values[index] = value.in_context(a.ctx) if isinstance(value, MPoly) else MPoly.constant(a.ctx, value)
    powers: Dict[Tuple[int, int], MPoly] = {}
    result = MPoly.zero(a.ctx)
    for exponent, coefficient in a.terms.items():
        free = tuple(0 if i in values else e for i, e in enumerate(exponent))
        term = MPoly(a.ctx, {free: coefficient})
        for index, value in values.items():
            power = exponent[index]
            if power:
                if (index, power) not in powers:
                    powers[(index, power)] = value**power
                term = term * powers[(index, power)]
        result = result + term
    referenced = {name for value in values.values() for name in value.variables()}
    removed = [name for name in bindings if name not in referenced]
    return result.in_context(a.ctx.without(removed))


def _horner(terms: Sequence[Tuple[Exponent, Fraction]], index: int, values: Sequence[complex]) -> complex:
    """Nested Horner evaluation, in the variable at index first and the later ones inside its coefficients."""
    if not terms:
        return 0j
    if index == len(values):
        return sum((complex(float(coefficient)) for _, coefficient in terms), 0j)
    groups: Dict[int, List[Tuple[Exponent, Fraction]]] = {}
    for exponent, coefficient in terms:
        groups.setdefault(exponent[index], []).append((exponent, coefficient))
    top = max(groups)
    total = _horner(groups[top], index + 1, values)
    for power in range(top - 1, -1, -1):
        total = total * values[index] + _horner(groups.get(power, []), index + 1, values)
    return total


def eval_complex(a: MPoly, point: Mapping[str, complex]) -> complex:
    """Floating evaluation by nested Horner accumulation, visiting terms in graded lexicographic order."""
    missing = [name for name in a.variables() if name not in point]
    if missing:
        raise PolynomialError("Unbound variable(s) in evaluation: %s" % ", ".join(missing))
    values = [complex(point.get(name, 0)) for name in a.ctx.names]
    return _horner(a.sorted_terms(), 0, values) if a.terms else 0j


def degree_profile(a: MPoly, name: str) -> Tuple[int, int]:
    """Return (degree, valuation) of a polynomial in one variable."""
    if a.is_zero():
        raise PolynomialError("The zero polynomial has no degree profile")
    i = a.ctx.index(name)
    powers = [exponent[i] for exponent in a.terms]
    return max(powers), min(powers)


def exact_divide(a: MPoly, b: MPoly) -> MPoly:
    """Divide exactly, failing if the division leaves a remainder."""
    _require_same_context(a, b)
    if b.is_zero():
        raise NonExactDivisionError("Division by the zero polynomial")
    if b.is_constant():
        return a * (1 / b.constant_value())
    lead_exponent, lead_coefficient = b.leading_term()
    quotient: Dict[Exponent, Fraction] = {}
    remainder = dict(a.terms)
    while remainder:
        exponent = max(remainder, key=_glex_key)
        shift = tuple(x - y for x, y in zip(exponent, lead_exponent))
        if any(s < 0 for s in shift):
            raise NonExactDivisionError("%s is not divisible by %s" % (a, b))
        factor = remainder[exponent] / lead_coefficient
        quotient[shift] = factor
        for be, bc in b.terms.items():
            key = tuple(x + y for x, y in zip(be, shift))
            value = remainder.get(key, Fraction(0)) - factor * bc
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    return MPoly(a.ctx, quotient)


@frozen
class PolyMatrix:
    """A rectangular matrix of polynomials sharing one context."""

    entries: Tuple[Tuple[MPoly, ...], ...] = field(converter=lambda rows: tuple(tuple(row) for row in rows))

    def __attrs_post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise PolynomialError("A matrix needs at least one row and one column")
        if len({len(row) for row in self.entries}) != 1:
            raise PolynomialError("Matrix rows have different lengths")
        if len({entry.ctx for row in self.entries for entry in row}) != 1:
            raise ContextMismatchError("Matrix entries do not share a context")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def ctx(self) -> VarContext:
        return self.entries[0][0].ctx

    def __getitem__(self, index: Tuple[int, int]) -> MPoly:
        return self.entries[index[0]][index[1]]


def determinant_fraction_free(m: PolyMatrix) -> MPoly:
    """Exact determinant via Bareiss fraction-free elimination with row pivoting."""
    if m.rows != m.cols:
        raise PolynomialError("Determinant of a non-square %dx%d matrix" % (m.rows, m.cols))
    n = m.rows
    a = [list(row) for row in m.entries]
    sign = 1
    previous = MPoly.constant(m.ctx, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if pivot is None:
                return MPoly.zero(m.ctx)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_divide(a[k][k] * a[i][j] - a[i][k] * a[k][j], previous)
        previous = a[k][k]
    return a[n - 1][n - 1] * sign


def sylvester_matrix(f: MPoly, g: MPoly, name: str) -> PolyMatrix:
    """Sylvester matrix of f and g regarded as univariate in one variable."""
    _require_same_context(f, g)
    if f.is_zero() or g.is_zero():
        raise PolynomialError("Sylvester matrix of a zero polynomial")
    fc, gc = f.coefficients_in(name), g.coefficients_in(name)
    m, n = max(fc), max(gc)
    if m == 0 and n == 0:
        raise PolynomialError("Both polynomials have degree 0 in %s" % name)
    size = m + n
    zero = MPoly.zero(f.ctx)
    rows = []
    for shift in range(n):
        row = [zero] * size
        for power, coefficient in fc.items():
            row[shift + m - power] = coefficient
        rows.append(row)
    for shift in range(m):
        row = [zero] * size
        for power, coefficient in gc.items():
            row[shift + n - power] = coefficient
        rows.append(row)
    return PolyMatrix(rows)


def resultant(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Sylvester resultant of f and g with respect to one variable."""
    return determinant_fraction_free(sylvester_matrix(f, g, name))


def is_univariate(a: MPoly, name: str) -> bool:
    """Whether every variable other than the named one has exponent zero in every term."""
    i = a.ctx.index(name)
    return all(not any(e for j, e in enumerate(exponent) if j != i) for exponent in a.terms)


def univariate_coefficients(a: MPoly, name: str) -> List[Fraction]:
    """Coefficients of a univariate polynomial in ascending order of power."""
    if not is_univariate(a, name):
        raise PolynomialError("Polynomial is not univariate in %s: %s" % (name, a))
    if a.is_zero():
        return []
    i = a.ctx.index(name)
    coefficients = [Fraction(0)] * (max(exponent[i] for exponent in a.terms) + 1)
    for exponent, coefficient in a.terms.items():
        coefficients[exponent[i]] = coefficient
    return coefficients


def from_univariate(ctx: VarContext, name: str, coefficients: Sequence[Rational]) -> MPoly:
    """Build a polynomial in one variable from ascending coefficients."""
    i = ctx.index(name)
    terms = {}
    for power, coefficient in enumerate(coefficients):
        exponent = [0] * len(ctx)
        exponent[i] = power
        terms[tuple(exponent)] = coefficient
    return MPoly(ctx, terms)


def _trim(coefficients: List[Fraction]) -> List[Fraction]:
    while coefficients and coefficients[-1] == 0:
        coefficients = coefficients[:-1]
    return coefficients


def _remainder(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _trim(a[:-1])
    return a


def _gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _remainder(a, b)
    return [c / a[-1] for c in a] if a else []


def univariate_gcd(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Monic gcd of two univariate polynomials, by the Euclidean algorithm."""
    _require_same_context(f, g)
    return from_univariate(f.ctx, name, _gcd(univariate_coefficients(f, name), univariate_coefficients(g, name)))


def squarefree_part(f: MPoly, name: str) -> MPoly:
    """f / gcd(f, f'), whose degree is the number of distinct complex roots."""
    if f.is_zero():
        raise PolynomialError("The zero polynomial has no squarefree part")
    common = univariate_gcd(f, partial_derivative(f, name), name)
    return exact_divide(f, common)


def squarefree_factorization(f: MPoly, name: str) -> List[Tuple[MPoly, int]]:
    """Yun's algorithm: pairwise coprime squarefree factors with their multiplicities, constants omitted."""
    if f.is_zero():
        raise PolynomialError("The zero polynomial has no squarefree factorization")
    derivative = partial_derivative(f, name)
    common = univariate_gcd(f, derivative, name)
    b = exact_divide(f, common)
    d = exact_divide(derivative, common) - partial_derivative(b, name)
    factors = []
    multiplicity = 1
    while not b.is_constant():
        a = univariate_gcd(b, d, name)
        if not a.is_constant():
            factors.append((a, multiplicity))
        b = exact_divide(b, a)
        d = exact_divide(d, a) - partial_derivative(b, name)
        multiplicity += 1
    return factors
