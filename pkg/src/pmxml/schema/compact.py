"""
Compact-syntax rendering of pattern graphs

Prints patterns back in RELAX-NG compact notation: `?` and `*` are
recovered from their Choice encodings, same-operator chains are flattened
and mixed operators are parenthesized.
"""

import logging

from pmxml.core.template_engine import get_engine
from pmxml.schema.patterns import (
    Attribute,
    Choice,
    Data,
    Datatype,
    Element,
    Empty,
    Group,
    Interleave,
    NamedRef,
    NotAllowed,
    OneOrMore,
    Pattern,
    PatternGraph,
    Text,
    ValueLiteral,
)

logger = logging.getLogger(__name__)

_OPERATORS = {Choice: " | ", Group: ", ", Interleave: " & "}


def _quote(literal: str) -> str:
    return '"' + literal.replace('"', '\\"') + '"'


def _flatten(p: Pattern, cls) -> list[Pattern]:
    if type(p) is cls and not _postfix(p):
        return _flatten(p.left, cls) + _flatten(p.right, cls)
    return [p]


def _postfix(p: Pattern):
    """(operand, suffix) when p is written with a postfix quantifier"""
    if isinstance(p, Choice) and isinstance(p.right, Empty):
        if isinstance(p.left, OneOrMore):
            return p.left.pattern, "*"
        return p.left, "?"
    if isinstance(p, OneOrMore):
        return p.pattern, "+"
    return None


def _render_datatype(p: Data) -> str:
    spec = p.datatype
    name = f"xsd:{spec.base.value}"
    if spec.base is Datatype.STRING and spec.regex_facet is not None:
        return f"{name} {{ pattern = {_quote(spec.regex_facet)} }}"
    return name


def render_pattern(p: Pattern, nested: bool = False) -> str:
    """
    Compact syntax for one pattern

    `nested` asks for parentheses around binary operator chains.
    """
    postfix = _postfix(p)
    if postfix is not None:
        operand, suffix = postfix
        return render_pattern(operand, nested=True) + suffix
    if isinstance(p, (Choice, Group, Interleave)):
        parts = [render_pattern(q, nested=True) for q in _flatten(p, type(p))]
        body = _OPERATORS[type(p)].join(parts)
        return f"( {body} )" if nested else body
    if isinstance(p, Element):
        return f"element {p.name} {{ {render_pattern(p.content)} }}"
    if isinstance(p, Attribute):
        return f"attribute {p.name} {{ {render_pattern(p.content)} }}"
    if isinstance(p, Data):
        return _render_datatype(p)
    if isinstance(p, ValueLiteral):
        return _quote(p.literal)
    if isinstance(p, NamedRef):
        return p.name
    if isinstance(p, Text):
        return "text"
    if isinstance(p, Empty):
        return "empty"
    if isinstance(p, NotAllowed):
        return "notAllowed"
    raise TypeError(f"not a pattern: {p!r}")


def render_compact(graph: PatternGraph) -> str:
    """The whole grammar in compact syntax, productions in definition order"""
    productions = [(name, render_pattern(body)) for name, body in graph.definitions.items()]
    logger.debug(f"Rendering {len(productions)} productions")
    return get_engine().render_template(
        "grammar.rnc.j2",
        {
            "namespace": graph.namespace,
            "start": render_pattern(graph.start),
            "productions": productions,
        },
    )
