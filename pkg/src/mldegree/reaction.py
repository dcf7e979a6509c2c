# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Parse and format chemical reaction equations.

The grammar is:

    reaction := side arrow side
    side     := term ('+' term)*
    term     := [uint] identifier
    arrow    := "<->" | "->" | "<-"

Whitespace is ignored, and an omitted coefficient means 1.  Every error is reported with the
byte offset in the source text where it was detected.
"""
import re
from enum import Enum
from typing import Iterator, List, Optional, Tuple

from attrs import field, frozen

from mldegree.errors import ReactionParseError

_TOKENS = re.compile(r"(?P<ws>\s+)|(?P<arrow><->|->|<-)|(?P<plus>\+)|(?P<number>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9]*)", re.ASCII)


class Arrow(str, Enum):
    """Kind of reaction arrow."""

    FORWARD = "->"
    BACKWARD = "<-"
    EQUILIBRIUM = "<->"


def _positive(_instance: object, _attribute: object, value: int) -> None:
    if value < 1:
        raise ValueError("Stoichiometric coefficient must be positive, got %d" % value)


def _identifier(_instance: object, _attribute: object, value: str) -> None:
    if not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", value):
        raise ValueError("Invalid species identifier: '%s'" % value)


@frozen
class SpeciesTerm:
    """A species with its stoichiometric coefficient."""

    species: str = field(validator=_identifier)
    coefficient: int = field(default=1, validator=_positive)


def _side(_instance: object, attribute: object, value: Tuple[SpeciesTerm, ...]) -> None:
    if not value:
        raise ValueError("Reaction side must not be empty")
    names = [term.species for term in value]
    if len(set(names)) != len(names):
        raise ValueError("Species must be unique within a side: %s" % ", ".join(names))


@frozen
class Reaction:
    """A parsed stoichiometric equation."""

    reactants: Tuple[SpeciesTerm, ...] = field(converter=tuple, validator=_side)
    products: Tuple[SpeciesTerm, ...] = field(converter=tuple, validator=_side)
    arrow: Arrow = Arrow.EQUILIBRIUM

    def __attrs_post_init__(self) -> None:
        shared = {term.species for term in self.reactants} & {term.species for term in self.products}
        if shared:
            raise ValueError("Species appear on both sides: %s" % ", ".join(sorted(shared)))

    @property
    def is_equilibrium(self) -> bool:
        return self.arrow == Arrow.EQUILIBRIUM

    def species(self) -> List[str]:
        """Species names in order of first appearance, reactants then products."""
        return [term.species for term in self.reactants + self.products]

    def __str__(self) -> str:
        return format_reaction(self)


@frozen
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> Iterator[_Token]:
    position = 0
    while position < len(text):
        match = _TOKENS.match(text, position)
        if not match:
            raise ReactionParseError("Unrecognized token '%s'" % text[position], _offset(text, position))
        if match.lastgroup != "ws":
            yield _Token(str(match.lastgroup), match.group(), _offset(text, position))
        position = match.end()
    yield _Token("end", "", _offset(text, len(text)))


def _offset(text: str, position: int) -> int:
    return len(text[:position].encode("utf8"))


def _parse_term(tokens: List[_Token], index: int) -> Tuple[Optional[Tuple[SpeciesTerm, _Token]], int]:
    start = tokens[index]
    coefficient = 1
    if start.kind == "number":
        coefficient = int(start.text)
        if coefficient == 0:
            raise ReactionParseError("Zero coefficient", start.offset)
        index += 1
    token = tokens[index]
    if token.kind != "ident":
        if start.kind == "number":
            raise ReactionParseError("Expected species after coefficient", token.offset)
        return None, index
    return (SpeciesTerm(token.text, coefficient), start), index + 1


def _parse_side(tokens: List[_Token], index: int, name: str) -> Tuple[List[Tuple[SpeciesTerm, _Token]], int]:
    terms: List[Tuple[SpeciesTerm, _Token]] = []
    while True:
        term, index = _parse_term(tokens, index)
        token = tokens[index]
        if term is None:
            if not terms:
                raise ReactionParseError("Empty %s side" % name, token.offset)
            raise ReactionParseError("Empty term", token.offset)
        if term[0].species in [existing.species for existing, _ in terms]:
            raise ReactionParseError("Duplicate species %s on %s side" % (term[0].species, name), term[1].offset)
        terms.append(term)
        if token.kind != "plus":
            return terms, index
        index += 1


def parse_reaction(text: str) -> Reaction:
    """Parse a reaction equation like "N2 + 3H2 <-> 2NH3"."""
    tokens = list(_tokenize(text))
    if tokens[0].kind == "end":
        raise ReactionParseError("Empty reaction", 0)
    reactants, index = _parse_side(tokens, 0, "reactant")
    token = tokens[index]
    if token.kind == "end":
        raise ReactionParseError("Missing arrow", token.offset)
    if token.kind != "arrow":
        raise ReactionParseError("Unexpected '%s'" % token.text, token.offset)
    arrow = Arrow(token.text)
    products, index = _parse_side(tokens, index + 1, "product")
    token = tokens[index]
    if token.kind != "end":
        raise ReactionParseError("Unexpected '%s'" % token.text, token.offset)
    for term, start in products:
        if term.species in [existing.species for existing, _ in reactants]:
            raise ReactionParseError("Species %s appears on both sides" % term.species, start.offset)
    return Reaction([term for term, _ in reactants], [term for term, _ in products], arrow)


def _format_term(term: SpeciesTerm) -> str:
    return "%d%s" % (term.coefficient, term.species) if term.coefficient > 1 else term.species


def format_reaction(r: Reaction) -> str:
    """Canonical text, with coefficients only when greater than 1."""
    reactants = " + ".join(_format_term(term) for term in r.reactants)
    products = " + ".join(_format_term(term) for term in r.products)
    return "%s %s %s" % (reactants, r.arrow.value, products)


def reaction_order(r: Reaction) -> int:
    """Sum of the reactant coefficients."""
    return sum(term.coefficient for term in r.reactants)
