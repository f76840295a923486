"""
Pattern AST for the RELAX-NG subset used by polymake data files

Patterns are frozen dataclasses so they hash structurally and can key the
validator's memo tables. The module also provides the builder helpers used
to transcribe the grammar (which keep the tree exactly as written) and the
simplifying constructors used by derivative computation.
"""

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Optional, Union


class Datatype(str, Enum):
    """XSD datatypes that occur in the grammar"""
    STRING = "string"
    NON_NEGATIVE_INTEGER = "nonNegativeInteger"
    HEX_BINARY = "hexBinary"
    TOKEN = "token"


@dataclass(frozen=True)
class DatatypeSpec:
    base: Datatype
    regex_facet: Optional[str] = None

    def __post_init__(self) -> None:
        if self.regex_facet is not None and self.base is not Datatype.STRING:
            raise ValueError("regex facets are only allowed on xsd:string")


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class NotAllowed:
    pass


@dataclass(frozen=True)
class Text:
    pass


@dataclass(frozen=True)
class Choice:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class Group:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class Interleave:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class OneOrMore:
    pattern: "Pattern"


@dataclass(frozen=True)
class Element:
    name: str
    content: "Pattern"


@dataclass(frozen=True)
class Attribute:
    name: str
    content: "Pattern"


@dataclass(frozen=True)
class Data:
    datatype: DatatypeSpec


@dataclass(frozen=True)
class ValueLiteral:
    literal: str


@dataclass(frozen=True)
class NamedRef:
    name: str


Pattern = Union[
    Empty, NotAllowed, Text, Choice, Group, Interleave, OneOrMore,
    Element, Attribute, Data, ValueLiteral, NamedRef,
]

EMPTY = Empty()
NOT_ALLOWED = NotAllowed()
TEXT = Text()


@dataclass(frozen=True)
class PatternGraph:
    """Named productions plus the start pattern"""

    definitions: Mapping[str, Pattern]
    start: Pattern
    namespace: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.definitions, MappingProxyType):
            object.__setattr__(self, "definitions", MappingProxyType(dict(self.definitions)))

    def __hash__(self) -> int:
        return hash((tuple(self.definitions), self.start))

    def lookup(self, name: str) -> Pattern:
        from pmxml.core.errors import SchemaInternalError

        try:
            return self.definitions[name]
        except KeyError:
            raise SchemaInternalError(f"undefined pattern reference '{name}'") from None


# ============================================================================
# Builders (transcription keeps the tree as written)
# ============================================================================


def _fold(cls, patterns: tuple[Pattern, ...]) -> Pattern:
    if not patterns:
        return EMPTY
    result = patterns[-1]
    for p in reversed(patterns[:-1]):
        result = cls(p, result)
    return result


def choice(*patterns: Pattern) -> Pattern:
    return _fold(Choice, patterns)


def group(*patterns: Pattern) -> Pattern:
    return _fold(Group, patterns)


def interleave(*patterns: Pattern) -> Pattern:
    return _fold(Interleave, patterns)


def optional(p: Pattern) -> Pattern:
    """`p?`"""
    return Choice(p, EMPTY)


def zero_or_more(p: Pattern) -> Pattern:
    """`p*`"""
    return Choice(OneOrMore(p), EMPTY)


def one_or_more(p: Pattern) -> Pattern:
    """`p+`"""
    return OneOrMore(p)


def ref(name: str) -> NamedRef:
    return NamedRef(name)


def element(name: str, *content: Pattern) -> Element:
    return Element(name, group(*content))


def attribute(name: str, content: Pattern = TEXT) -> Attribute:
    return Attribute(name, content)


def data(base: Datatype, regex: Optional[str] = None) -> Data:
    return Data(DatatypeSpec(base, regex))


# ============================================================================
# Simplifying constructors (derivatives)
# ============================================================================


def mk_choice(a: Pattern, b: Pattern) -> Pattern:
    if isinstance(a, NotAllowed):
        return b
    if isinstance(b, NotAllowed):
        return a
    if a == b:
        return a
    return Choice(a, b)


def mk_group(a: Pattern, b: Pattern) -> Pattern:
    if isinstance(a, NotAllowed) or isinstance(b, NotAllowed):
        return NOT_ALLOWED
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    return Group(a, b)


def mk_interleave(a: Pattern, b: Pattern) -> Pattern:
    if isinstance(a, NotAllowed) or isinstance(b, NotAllowed):
        return NOT_ALLOWED
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    return Interleave(a, b)


def mk_one_or_more(p: Pattern) -> Pattern:
    if isinstance(p, NotAllowed):
        return NOT_ALLOWED
    return OneOrMore(p)
