"""Closed set of type tags used by the class table, lowering and interpreter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class TypeTag:
    kind: str                 # int | boolean | char | String | void | null | obj
    cls: Optional[str] = None  # class/interface name when kind == "obj"

    def __str__(self):
        return self.cls if self.kind == "obj" else self.kind

    @property
    def is_numeric(self):
        return self.kind in ("int", "char")

    @property
    def is_object(self):
        return self.kind in ("obj", "null")


INT = TypeTag("int")
BOOL = TypeTag("boolean")
CHAR = TypeTag("char")
STR = TypeTag("String")
VOID = TypeTag("void")
NULL = TypeTag("null")


def obj(cls_name):
    return TypeTag("obj", cls_name)


def compatible(arg, param):
    """Assignment compatibility of an argument tag to a parameter tag.

    Object types are mutually compatible: object identity distinctions are
    collapsed by the uniform object record, so only the coarse kind matters.
    int and char interconvert.
    """
    if arg == param:
        return True
    if arg.is_numeric and param.is_numeric:
        return True
    if arg.is_object and param.is_object:
        return True
    return False
