"""
XML infoset layer

A minimal immutable document model plus the byte-level reader and writer
the rest of pmxml works on. All XML syntax concerns (entities, CDATA,
namespaces, escaping, indentation) stay inside this module.
"""

import logging
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from xml.parsers import expat

from pmxml.core.errors import WellFormednessError

logger = logging.getLogger(__name__)

XML_NAMESPACE = "http://www.w3.org/XML/1998/namespace"
XML_DECLARATION = '<?xml version="1.0" encoding="utf-8"?>'
_WHITESPACE = " \t\n\r"
_NS_SEPARATOR = " "


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class TextChild(_Frozen):
    """Character data, entity references already decoded"""

    kind: Literal["text"] = "text"
    text: str


class CDataChild(_Frozen):
    """Verbatim content of a CDATA section"""

    kind: Literal["cdata"] = "cdata"
    text: str


class XmlElement(_Frozen):
    """
    One element: local name, namespace URI, ordered attributes, ordered children

    Attribute names in a foreign namespace are stored in Clark notation
    (``{uri}local``).
    """

    kind: Literal["element"] = "element"
    name: str
    namespace: str = ""
    attributes: tuple[tuple[str, str], ...] = ()
    children: tuple["XmlNode", ...] = ()

    @model_validator(mode="after")
    def _unique_attributes(self) -> "XmlElement":
        names = [name for name, _ in self.attributes]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate attribute on <{self.name}>")
        return self

    def get(self, name: str, default: Optional[str] = None) -> Optional[str]:
        """Value of an attribute, or default"""
        for key, value in self.attributes:
            if key == name:
                return value
        return default

    @property
    def element_children(self) -> list["XmlElement"]:
        return [c for c in self.children if isinstance(c, XmlElement)]

    @property
    def text(self) -> str:
        """Concatenated text and CDATA content"""
        return "".join(c.text for c in self.children if not isinstance(c, XmlElement))


XmlNode = Annotated[Union[XmlElement, TextChild, CDataChild], Field(discriminator="kind")]
XmlElement.model_rebuild()


class XmlTree(_Frozen):
    """A whole document: root element plus the processing instructions before it"""

    root: XmlElement
    leading_pis: tuple[tuple[str, str], ...] = ()
    declared_encoding: str = "utf-8"


def is_whitespace(text: str) -> bool:
    return all(ch in _WHITESPACE for ch in text)


# ============================================================================
# Reading
# ============================================================================


class _Frame:
    __slots__ = ("name", "namespace", "attributes", "children", "text", "cdata")

    def __init__(self, name: str, namespace: str, attributes: tuple[tuple[str, str], ...]):
        self.name = name
        self.namespace = namespace
        self.attributes = attributes
        self.children: list = []
        self.text: list[str] = []
        self.cdata: Optional[list[str]] = None


def _split_name(qname: str) -> tuple[str, str]:
    if _NS_SEPARATOR in qname:
        uri, local = qname.split(_NS_SEPARATOR, 1)
        return uri, local
    return "", qname


class _TreeBuilder:
    """Expat handler collecting an XmlTree"""

    def __init__(self, parser):
        self._parser = parser
        self._stack: list[_Frame] = []
        self.root: Optional[XmlElement] = None
        self.pis: list[tuple[str, str]] = []
        self.encoding = "utf-8"

    def _fail(self, message: str) -> None:
        raise WellFormednessError(
            message,
            self._parser.CurrentLineNumber,
            self._parser.CurrentColumnNumber + 1,
        )

    def _flush_text(self) -> None:
        if self._stack and self._stack[-1].text:
            frame = self._stack[-1]
            frame.children.append(TextChild(text="".join(frame.text)))
            frame.text = []

    def xml_decl(self, version, encoding, standalone) -> None:
        if encoding:
            self.encoding = encoding
            if encoding.lower().replace("_", "-") not in ("utf-8", "utf8"):
                logger.warning(f"Declared encoding {encoding!r} ignored; reading as UTF-8")

    def doctype(self, *args) -> None:
        self._fail("document type declarations are not supported")

    def start_element(self, qname: str, attrs: list[str]) -> None:
        self._flush_text()
        namespace, local = _split_name(qname)
        pairs = []
        for i in range(0, len(attrs), 2):
            uri, attr_local = _split_name(attrs[i])
            pairs.append((f"{{{uri}}}{attr_local}" if uri else attr_local, attrs[i + 1]))
        self._stack.append(_Frame(local, namespace, tuple(pairs)))

    def end_element(self, qname: str) -> None:
        self._flush_text()
        frame = self._stack.pop()
        children = frame.children
        if any(isinstance(c, XmlElement) for c in children):
            children = [
                c for c in children if not (isinstance(c, TextChild) and is_whitespace(c.text))
            ]
        element = XmlElement(
            name=frame.name,
            namespace=frame.namespace,
            attributes=frame.attributes,
            children=tuple(children),
        )
        if self._stack:
            self._stack[-1].children.append(element)
        else:
            self.root = element

    def characters(self, data: str) -> None:
        if not self._stack:
            return
        frame = self._stack[-1]
        if frame.cdata is not None:
            frame.cdata.append(data)
        else:
            frame.text.append(data)

    def start_cdata(self) -> None:
        self._flush_text()
        if self._stack:
            self._stack[-1].cdata = []

    def end_cdata(self) -> None:
        if self._stack:
            frame = self._stack[-1]
            frame.children.append(CDataChild(text="".join(frame.cdata or [])))
            frame.cdata = None

    def processing_instruction(self, target: str, data: str) -> None:
        if self.root is None and not self._stack:
            self.pis.append((target, data))
        else:
            logger.warning(f"Dropping processing instruction <?{target}?> outside the prolog")


def read_document(data: bytes) -> XmlTree:
    """
    Parse UTF-8 XML bytes into an XmlTree

    Comments are discarded, CDATA sections are kept as CDataChild and
    whitespace-only text between element children is dropped.

    Raises:
        WellFormednessError: On any XML syntax error, DTD or undefined entity
    """
    parser = expat.ParserCreate("utf-8", _NS_SEPARATOR)
    parser.ordered_attributes = True
    parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_NEVER)
    builder = _TreeBuilder(parser)
    parser.XmlDeclHandler = builder.xml_decl
    parser.StartDoctypeDeclHandler = builder.doctype
    parser.StartElementHandler = builder.start_element
    parser.EndElementHandler = builder.end_element
    parser.CharacterDataHandler = builder.characters
    parser.StartCdataSectionHandler = builder.start_cdata
    parser.EndCdataSectionHandler = builder.end_cdata
    parser.ProcessingInstructionHandler = builder.processing_instruction

    try:
        parser.Parse(data, True)
    except expat.ExpatError as e:
        raise WellFormednessError(expat.errors.messages[e.code], e.lineno, e.offset + 1) from e

    if builder.root is None:
        raise WellFormednessError("no root element", 1, 1)
    logger.debug(f"Read document with root <{builder.root.name}>")
    return XmlTree(root=builder.root, leading_pis=tuple(builder.pis), declared_encoding=builder.encoding)


# ============================================================================
# Writing
# ============================================================================


def _escape_text(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace("\r", "&#13;")
    )


def _escape_attribute(text: str) -> str:
    return (
        _escape_text(text)
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\t", "&#9;")
    )


def _cdata(text: str) -> str:
    if "\r" in text:
        return _escape_text(text)
    return "<![CDATA[" + text.replace("]]>", "]]]]><![CDATA[>") + "]]>"


class _Writer:
    def __init__(self, indent: int):
        self.indent = indent
        self.out: list[str] = []

    def start_tag(self, element: XmlElement, scope_ns: str, close: bool) -> str:
        parts = [element.name]
        prefixes: dict[str, str] = {}
        rendered = []
        for name, value in element.attributes:
            if name.startswith("{"):
                uri, local = name[1:].split("}", 1)
                if uri == XML_NAMESPACE:
                    name = f"xml:{local}"
                else:
                    prefix = prefixes.setdefault(uri, f"ns{len(prefixes)}")
                    name = f"{prefix}:{local}"
            rendered.append(f'{name}="{_escape_attribute(value)}"')
        parts.extend(rendered)
        if element.namespace != scope_ns:
            parts.append(f'xmlns="{_escape_attribute(element.namespace)}"')
        for uri, prefix in prefixes.items():
            parts.append(f'xmlns:{prefix}="{_escape_attribute(uri)}"')
        return "<" + " ".join(parts) + (" />" if close else ">")

    def inline(self, element: XmlElement, scope_ns: str) -> str:
        if not element.children:
            return self.start_tag(element, scope_ns, close=True)
        body = []
        for child in element.children:
            if isinstance(child, XmlElement):
                body.append(self.inline(child, element.namespace))
            elif isinstance(child, CDataChild):
                body.append(_cdata(child.text))
            else:
                body.append(_escape_text(child.text))
        return self.start_tag(element, scope_ns, close=False) + "".join(body) + f"</{element.name}>"

    def element(self, element: XmlElement, scope_ns: str, depth: int) -> None:
        pad = " " * (self.indent * depth)
        has_elements = any(isinstance(c, XmlElement) for c in element.children)
        has_text = any(
            not isinstance(c, XmlElement) and c.text for c in element.children
        )
        if not has_elements or has_text:
            # leaf or mixed content: whitespace is significant, emit on one line
            self.out.append(pad + self.inline(element, scope_ns))
            return
        self.out.append(pad + self.start_tag(element, scope_ns, close=False))
        for child in element.children:
            if isinstance(child, XmlElement):
                self.element(child, element.namespace, depth + 1)
        self.out.append(pad + f"</{element.name}>")


def write_document(tree: XmlTree, indent: int = 2) -> bytes:
    """
    Serialize an XmlTree to UTF-8 bytes

    Emits the XML declaration, the leading processing instructions and the
    root with `indent` spaces per level; text-only content stays inline and
    empty elements are self-closing.
    """
    writer = _Writer(indent)
    writer.out.append(XML_DECLARATION)
    for target, content in tree.leading_pis:
        writer.out.append(f"<?{target} {content}?>" if content else f"<?{target}?>")
    writer.element(tree.root, "", 0)
    return ("\n".join(writer.out) + "\n").encode("utf-8")


# ============================================================================
# Comparison
# ============================================================================


def _normalize(element: XmlElement) -> tuple:
    merged: list = []
    pending: list[str] = []
    for child in element.children:
        if isinstance(child, XmlElement):
            if pending:
                merged.append("".join(pending))
                pending = []
            merged.append(_normalize(child))
        else:
            pending.append(child.text)
    if pending:
        merged.append("".join(pending))
    if any(isinstance(c, tuple) for c in merged):
        merged = [c for c in merged if isinstance(c, tuple) or not is_whitespace(c)]
    else:
        merged = [c for c in merged if c]
    return (element.namespace, element.name, tuple(sorted(element.attributes)), tuple(merged))


def infoset_equal(a: XmlTree, b: XmlTree) -> bool:
    """
    Compare two trees ignoring attribute order, formatting whitespace and
    the CDATA/text distinction; processing instructions compare verbatim
    """
    if tuple(a.leading_pis) != tuple(b.leading_pis):
        return False
    return _normalize(a.root) == _normalize(b.root)
