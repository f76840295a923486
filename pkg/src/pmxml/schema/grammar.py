"""
The polymake data file grammar

Transcribes every production of the polymake RELAX-NG grammar into the
pattern AST. The transcription keeps the tree exactly as written, so the
compact renderer can print it back production by production.
"""

from functools import lru_cache

from pmxml.schema.patterns import (
    EMPTY,
    TEXT,
    Datatype,
    PatternGraph,
    ValueLiteral,
    attribute,
    choice,
    data,
    element,
    group,
    interleave,
    one_or_more,
    optional,
    ref,
    zero_or_more,
)

POLYMAKE_NAMESPACE = "http://www.math.tu-berlin.de/polymake/#3"

TYPE_NAME_REGEX = "[a-zA-Z][a-zA-Z_0-9]*::.*"
VERSION_REGEX = "[\\d.]+"
SIMPLE_NAME_REGEX = "[a-zA-Z][a-zA-Z_0-9]*"

PRODUCTION_NAMES = (
    "TopObject",
    "TopAttribs",
    "ObjectContent",
    "Property",
    "SubObject",
    "Attachment",
    "LooseData",
    "SimpleName",
    "PropertyData",
    "AttachmentData",
    "Text",
    "Complex",
    "VectorContents",
    "ElementIndex",
    "IdReference",
    "Vector",
    "MatrixContents",
    "Matrix",
    "TupleContents",
    "Tuple",
)


def _non_negative_integer():
    return data(Datatype.NON_NEGATIVE_INTEGER)


def _ext():
    return optional(attribute("ext", TEXT))


def _version_and_tm():
    return (
        optional(attribute("version", data(Datatype.STRING, VERSION_REGEX))),
        optional(attribute("tm", data(Datatype.HEX_BINARY))),
    )


@lru_cache(maxsize=1)
def polymake_schema() -> PatternGraph:
    """
    Build the fixed pattern graph for polymake data files

    `data` roots take a free-form `type`: loose data is typed by plain
    property types such as ``Array<Polynomial<QuadraticExtension>>``,
    which carry no application prefix.
    """
    definitions = {
        "TopObject": element("object", ref("TopAttribs"), ref("ObjectContent")),
        "TopAttribs": group(
            attribute("type", data(Datatype.STRING, TYPE_NAME_REGEX)),
            *_version_and_tm(),
        ),
        "ObjectContent": group(
            optional(attribute("name", TEXT)),
            _ext(),
            optional(element("description", TEXT)),
            zero_or_more(element("credit", attribute("product", TEXT), TEXT)),
            interleave(zero_or_more(ref("Property")), zero_or_more(ref("Attachment"))),
        ),
        "Property": element(
            "property",
            ref("SimpleName"),
            _ext(),
            choice(
                group(attribute("undef", ValueLiteral("true")), EMPTY),
                group(optional(attribute("type", TEXT)), ref("PropertyData")),
                ref("Text"),
                one_or_more(ref("SubObject")),
            ),
        ),
        "SubObject": element(
            "object", optional(attribute("type", TEXT)), ref("ObjectContent")
        ),
        "Attachment": element(
            "attachment", ref("SimpleName"), _ext(), ref("AttachmentData")
        ),
        "LooseData": element(
            "data",
            # differs from the published compact grammar, which gives data
            # roots the TYPE_NAME_REGEX of top-level objects
            attribute("type", TEXT),
            *_version_and_tm(),
            _ext(),
            optional(element("description", TEXT)),
            ref("PropertyData"),
        ),
        "SimpleName": attribute("name", data(Datatype.STRING, SIMPLE_NAME_REGEX)),
        "PropertyData": choice(
            group(attribute("value", TEXT), EMPTY),
            ref("IdReference"),
            ref("Complex"),
            element("m", one_or_more(ref("SubObject"))),
        ),
        "AttachmentData": choice(
            group(optional(attribute("type", TEXT)), attribute("value", TEXT), EMPTY),
            group(
                attribute("type", TEXT),
                optional(attribute("construct", TEXT)),
                ref("Complex"),
            ),
            ref("Text"),
        ),
        "Text": group(attribute("type", ValueLiteral("text")), TEXT),
        "Complex": choice(ref("Vector"), ref("Matrix"), ref("Tuple")),
        "VectorContents": choice(
            TEXT,
            group(
                optional(attribute("dim", _non_negative_integer())),
                choice(
                    zero_or_more(element("e", ref("ElementIndex"), TEXT)),
                    one_or_more(
                        element("t", optional(ref("ElementIndex")), ref("TupleContents"))
                    ),
                ),
            ),
        ),
        "ElementIndex": attribute("i", _non_negative_integer()),
        "IdReference": element(
            "r", optional(attribute("id", _non_negative_integer())), EMPTY
        ),
        "Vector": element("v", ref("VectorContents")),
        "MatrixContents": choice(
            group(optional(attribute("cols", _non_negative_integer())), zero_or_more(ref("Vector"))),
            group(
                attribute("dim", _non_negative_integer()),
                zero_or_more(element("v", ref("ElementIndex"), ref("VectorContents"))),
            ),
            one_or_more(ref("Matrix")),
            one_or_more(ref("Tuple")),
        ),
        "Matrix": element("m", ref("MatrixContents")),
        "TupleContents": group(
            optional(attribute("id", _non_negative_integer())),
            choice(
                TEXT,
                one_or_more(
                    choice(
                        ref("Vector"),
                        ref("Matrix"),
                        ref("Tuple"),
                        ref("IdReference"),
                        element("e", TEXT),
                    )
                ),
            ),
        ),
        "Tuple": element("t", ref("TupleContents")),
    }
    return PatternGraph(
        definitions=definitions,
        start=choice(ref("TopObject"), ref("LooseData")),
        namespace=POLYMAKE_NAMESPACE,
    )
