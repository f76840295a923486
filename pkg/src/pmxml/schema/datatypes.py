"""
XSD datatype checks for the grammar's Data patterns

Only the XML Schema regex features the grammar uses are translated:
literals, character classes, `\\d`, `.` and the quantifiers. Facets are
anchored (full match), as XSD patterns always are.
"""

import re
from functools import lru_cache

from pmxml.schema.patterns import Datatype, DatatypeSpec

_XML_WHITESPACE = " \t\n\r"
_NON_NEGATIVE_INTEGER = re.compile(r"\+?[0-9]+")
_HEX_BINARY = re.compile(r"(?:[0-9a-fA-F]{2})*")


@lru_cache(maxsize=64)
def translate_xsd_regex(pattern: str) -> re.Pattern:
    """
    Compile an XSD regex facet into an anchored Python pattern

    `\\d` becomes ASCII digits and `.` excludes only line breaks, as in XSD.
    """
    out: list[str] = []
    in_class = False
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\" and i + 1 < len(pattern):
            nxt = pattern[i + 1]
            if nxt == "d":
                out.append("0-9" if in_class else "[0-9]")
            else:
                out.append("\\" + nxt)
            i += 2
            continue
        if ch == "[":
            in_class = True
        elif ch == "]":
            in_class = False
        elif ch == "." and not in_class:
            out.append("[^\\n\\r]")
            i += 1
            continue
        elif ch in "^$" and not in_class:
            out.append("\\" + ch)
            i += 1
            continue
        out.append(ch)
        i += 1
    return re.compile("".join(out))


def collapse_whitespace(text: str) -> str:
    return " ".join(text.split())


def match_datatype(spec: DatatypeSpec, text: str) -> bool:
    """Whether text is a lexical value of the datatype (and its facet)"""
    if spec.base is Datatype.STRING:
        if spec.regex_facet is None:
            return True
        return translate_xsd_regex(spec.regex_facet).fullmatch(text) is not None
    if spec.base is Datatype.NON_NEGATIVE_INTEGER:
        return _NON_NEGATIVE_INTEGER.fullmatch(text.strip(_XML_WHITESPACE)) is not None
    if spec.base is Datatype.HEX_BINARY:
        return _HEX_BINARY.fullmatch(text.strip(_XML_WHITESPACE)) is not None
    # token: anything is a token once whitespace is collapsed
    return True
