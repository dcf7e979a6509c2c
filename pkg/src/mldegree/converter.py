# -*- coding: utf-8 -*-
# vim: set ft=python ts=4 sw=4 expandtab:

"""
Converter for attrs configuration classes, read from YAML with camelCase keys.
"""
import re
from typing import Any, Type, TypeVar

import attrs
import cattrs
import yaml
from cattrs.gen import make_dict_structure_fn, override

T = TypeVar("T")


def _camel_case(name: str) -> str:
    """Convert a snake_case attribute name to camelCase."""
    return re.sub(r"_([a-z0-9])", lambda m: m.group(1).upper(), name)


class StandardConverter(cattrs.Converter):
    """
    Cattrs converter that knows how to handle configuration classes.

    Attribute names are snake_case in Python and camelCase in the YAML.  Unknown keys
    are rejected, so a misspelled setting fails loudly instead of being ignored.
    """

    def __init__(self) -> None:
        super().__init__()
        self.register_structure_hook_factory(attrs.has, self._structure_factory)

    def _structure_factory(self, cls: Type[Any]) -> Any:
        renames = {a.name: override(rename=_camel_case(a.name)) for a in attrs.fields(cls)}
        return make_dict_structure_fn(cls, self, _cattrs_forbid_extra_keys=True, **renames)

    def from_yaml(self, data: str, cls: Type[T]) -> T:
        """Deserialize an object from YAML."""
        return self.structure(yaml.safe_load(data), cls)


CONVERTER = StandardConverter()
