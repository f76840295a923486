"""
Codec between XML trees and Documents

decode maps a (validated) XmlTree onto the document model, encode produces
the canonical tree for a Document, and the dense/sparse helpers convert
vector and matrix containers. to_json exports a Document as deterministic
JSON whose layout is described in docs/json-mapping.md.
"""

import json
import logging
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from pmxml.core.errors import (
    AttachmentNameError,
    DanglingReferenceError,
    DecodeError,
    IndexOutOfRangeError,
    MissingDimensionError,
    ModelError,
    RaggedRowsError,
    SchemaViolationError,
    ShapeError,
    ShapeMismatchError,
    SparseIndexError,
)
from pmxml.core.infoset import CDataChild, TextChild, XmlElement, XmlTree
from pmxml.core.models import (
    Attachment,
    ComplexValue,
    Credit,
    DenseRows,
    DenseText,
    Document,
    ElementE,
    IndexedRow,
    ItemList,
    LooseData,
    MatrixM,
    MatrixRows,
    ObjectMatrix,
    ObjectNode,
    Property,
    RawText,
    RefR,
    ScalarText,
    ScalarValue,
    SparseE,
    SparseEntry,
    SparseRows,
    Subobjects,
    TextPayload,
    TupleEntries,
    TupleEntry,
    TupleRows,
    TupleV,
    TypedData,
    Undefined,
    Value,
    VectorV,
    collect_ids,
    nested_references,
    split_tokens,
)
from pmxml.schema.datatypes import collapse_whitespace
from pmxml.schema.grammar import POLYMAKE_NAMESPACE, polymake_schema
from pmxml.schema.validator import validate

logger = logging.getLogger(__name__)

ATTRIBUTE_ORDER = (
    "name", "type", "value", "undef", "ext", "construct",
    "cols", "dim", "i", "id", "version", "tm", "xmlns",
)
_ATTRIBUTE_RANK = {name: rank for rank, name in enumerate(ATTRIBUTE_ORDER)}
INTEGER_ATTRIBUTES = frozenset({"cols", "dim", "i", "id"})
# token-typed literals: validation compares them whitespace-collapsed
COLLAPSED_ATTRIBUTES = frozenset({"undef", "tm"})


class DecodeOptions(BaseModel):
    """How strictly decode treats its input"""

    model_config = ConfigDict(frozen=True)

    lax_namespace: bool = Field(default=False, description="Accept a root without namespace")
    validate_first: bool = Field(default=True, description="Validate before decoding")


class DenseVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.entries)


class DenseMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[DenseVector, ...] = ()
    cols: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _rectangular(self) -> "DenseMatrix":
        for row in self.rows:
            if row.length != self.cols:
                raise ValueError(f"row of length {row.length} in matrix with {self.cols} columns")
        return self

    @property
    def row_count(self) -> int:
        return len(self.rows)


# ============================================================================
# Dense / sparse conversion
# ============================================================================


def tokenize_dense(raw: str) -> list[str]:
    """Split dense vector text into its tokens"""
    return split_tokens(raw)


def densify_vector(v: VectorV, length_hint: Optional[int] = None, zero: str = "0") -> DenseVector:
    """
    Expand a vector to its full list of tokens

    Raises:
        MissingDimensionError: Sparse vector with neither dim nor hint
        IndexOutOfRangeError: Sparse index beyond the length
        ShapeError: Vector of tuples
    """
    if isinstance(v.entries, DenseText):
        return DenseVector(entries=tuple(tokenize_dense(v.entries.raw)))
    if not isinstance(v.entries, SparseE):
        raise ShapeError("cannot densify a vector of tuples")
    length = v.dim if v.dim is not None else length_hint
    if length is None:
        raise MissingDimensionError()
    tokens = [zero] * length
    for entry in v.entries.entries:
        if entry.index >= length:
            raise IndexOutOfRangeError(entry.index, length)
        tokens[entry.index] = entry.text
    return DenseVector(entries=tuple(tokens))


def _row_width(row: VectorV) -> Optional[int]:
    if isinstance(row.entries, DenseText):
        return len(tokenize_dense(row.entries.raw))
    return row.dim


def matrix_width(m: MatrixM) -> Optional[int]:
    """
    Column count of a dense or sparse-row matrix, None when underivable

    Raises:
        RaggedRowsError: Rows disagree on their width
    """
    if isinstance(m.rows, (MatrixRows, TupleRows)):
        raise ShapeError("matrix rows are not vectors")
    rows = [r.row for r in m.rows.rows] if isinstance(m.rows, SparseRows) else list(m.rows.rows)
    widths = [w for w in (_row_width(r) for r in rows) if w is not None]
    if m.cols is not None:
        if any(w != m.cols for w in widths):
            raise RaggedRowsError([m.cols] + widths)
        return m.cols
    if len(set(widths)) > 1:
        raise RaggedRowsError(widths)
    if widths:
        return widths[0]
    return 0 if not rows else None


def densify_matrix(m: MatrixM, zero: str = "0") -> DenseMatrix:
    """
    Expand a matrix to dense rows of a common width

    Raises:
        RaggedRowsError: Dense rows of unequal width
        MissingDimensionError: Width or row count cannot be derived
        ShapeError: Nested matrices or tuple rows
    """
    width = matrix_width(m)
    if width is None:
        raise MissingDimensionError("matrix")
    if isinstance(m.rows, SparseRows):
        assert m.dim is not None
        dense = [DenseVector(entries=(zero,) * width) for _ in range(m.dim)]
        for indexed in m.rows.rows:
            dense[indexed.index] = densify_vector(indexed.row, width, zero)
        return DenseMatrix(rows=tuple(dense), cols=width)
    rows = tuple(densify_vector(row, width, zero) for row in m.rows.rows)
    return DenseMatrix(rows=rows, cols=width)


def sparsify_vector(d: DenseVector, zero: str = "0") -> VectorV:
    """Sparse vector holding the entries of d that differ from zero"""
    entries = tuple(
        SparseEntry(index=i, text=token) for i, token in enumerate(d.entries) if token != zero
    )
    return VectorV(dim=d.length, entries=SparseE(entries=entries))


# ============================================================================
# Decoding
# ============================================================================


def _int_attr(el: XmlElement, name: str, path: str) -> Optional[int]:
    raw = el.get(name)
    if raw is None:
        return None
    try:
        value = int(raw.strip())
    except ValueError:
        raise DecodeError(f"attribute {name}={raw!r} is not an integer", path) from None
    if value < 0:
        raise DecodeError(f"attribute {name}={raw!r} is negative", path)
    return value


def declares_text(el: XmlElement) -> bool:
    """
    Whether a property or attachment carries a text payload

    That is `type="text"` (compared after whitespace collapsing, as the
    validator does) with neither a value attribute nor child elements.
    """
    declared = el.get("type")
    return (
        declared is not None
        and collapse_whitespace(declared) == "text"
        and el.get("value") is None
        and el.get("undef") is None
        and not el.element_children
    )


def holds_text(el: XmlElement) -> bool:
    """Whether the character data of el is content rather than formatting"""
    if el.name in ("e", "description", "credit"):
        return True
    if el.name == "t":
        return not el.element_children
    if el.name == "v":
        return not el.element_children and el.get("dim") is None
    if el.name in ("property", "attachment"):
        return declares_text(el)
    return False


def _collapsed(raw: Optional[str]) -> Optional[str]:
    return None if raw is None else collapse_whitespace(raw)


class _Decoder:
    def __init__(self) -> None:
        self.path: list[str] = []

    @property
    def where(self) -> str:
        return "/" + "/".join(self.path)

    def enter(self, el: XmlElement) -> None:
        self.path.append(el.name)

    def leave(self) -> None:
        self.path.pop()

    # values --------------------------------------------------------------

    def vector(self, el: XmlElement) -> VectorV:
        self.enter(el)
        try:
            dim = _int_attr(el, "dim", self.where)
            children = el.element_children
            names = {c.name for c in children}
            if "t" in names:
                entries: Any = TupleEntries(
                    entries=tuple(
                        TupleEntry(index=_int_attr(c, "i", self.where), item=self.tuple(c))
                        for c in children
                    )
                )
            elif "e" in names or dim is not None:
                sparse = []
                for c in children:
                    index = _int_attr(c, "i", self.where)
                    if index is None:
                        raise DecodeError("sparse entry without index", self.where)
                    if sparse and index <= sparse[-1].index:
                        raise SparseIndexError(index, sparse[-1].index)
                    sparse.append(SparseEntry(index=index, text=c.text))
                entries = SparseE(entries=tuple(sparse))
            else:
                entries = DenseText(raw=el.text)
            return VectorV(dim=dim, entries=entries)
        finally:
            self.leave()

    def matrix(self, el: XmlElement) -> Value:
        self.enter(el)
        try:
            children = el.element_children
            names = {c.name for c in children}
            cols = _int_attr(el, "cols", self.where)
            dim = _int_attr(el, "dim", self.where)
            if "object" in names:
                return ObjectMatrix(objects=tuple(self.object(c) for c in children))
            if dim is not None or any(c.get("i") is not None for c in children):
                rows = []
                for c in children:
                    index = _int_attr(c, "i", self.where)
                    if index is None:
                        raise DecodeError("sparse row without index", self.where)
                    if rows and index <= rows[-1].index:
                        raise SparseIndexError(index, rows[-1].index)
                    rows.append(IndexedRow(index=index, row=self.vector(c)))
                return MatrixM(dim=dim, cols=cols, rows=SparseRows(rows=tuple(rows)))
            if "m" in names:
                body: Any = MatrixRows(rows=tuple(self.matrix(c) for c in children))
            elif "t" in names:
                body = TupleRows(rows=tuple(self.tuple(c) for c in children))
            else:
                body = DenseRows(rows=tuple(self.vector(c) for c in children))
            if cols is not None and isinstance(body, DenseRows):
                for row in body.rows:
                    width = _row_width(row)
                    if isinstance(row.entries, DenseText) and width != cols:
                        raise ShapeMismatchError(
                            f"{self.where}: dense row of width {width} in matrix with cols={cols}"
                        )
            return MatrixM(cols=cols, rows=body)
        finally:
            self.leave()

    def tuple(self, el: XmlElement) -> TupleV:
        self.enter(el)
        try:
            children = el.element_children
            tuple_id = _int_attr(el, "id", self.where)
            if not children:
                return TupleV(id=tuple_id, items=RawText(text=el.text))
            return TupleV(id=tuple_id, items=ItemList(items=tuple(self.item(c) for c in children)))
        finally:
            self.leave()

    def item(self, el: XmlElement) -> Value:
        if el.name == "e":
            return ElementE(text=el.text)
        return self.value(el)

    def value(self, el: XmlElement) -> Value:
        if el.name == "v":
            return self.vector(el)
        if el.name == "m":
            return self.matrix(el)
        if el.name == "t":
            return self.tuple(el)
        if el.name == "r":
            return RefR(id=_int_attr(el, "id", self.where))
        raise DecodeError(f"unexpected element <{el.name}> where a value is expected", self.where)

    def checked_value(self, el: XmlElement) -> Value:
        """A top-level value with its id scope checked"""
        value = self.value(el)
        table = collect_ids(value)
        for ref in nested_references(value):
            if ref.id is not None and ref.id not in table:
                raise DanglingReferenceError(ref.id)
        return value

    def single_value_child(self, el: XmlElement) -> Optional[XmlElement]:
        children = [c for c in el.element_children if c.name != "description"]
        if len(children) > 1:
            raise DecodeError("more than one value element", self.where)
        return children[0] if children else None

    # objects -------------------------------------------------------------

    def property(self, el: XmlElement) -> Property:
        self.enter(el)
        try:
            name = el.get("name") or ""
            ext = el.get("ext")
            declared = el.get("type")
            children = el.element_children
            payload: Any
            if el.get("undef") is not None:
                payload = Undefined()
            elif el.get("value") is not None:
                payload = ScalarValue(declared_type=declared, text=el.get("value"))
            elif children and all(c.name == "object" for c in children):
                payload = Subobjects(objects=tuple(self.object(c) for c in children))
            elif declares_text(el):
                payload = TextPayload(text=el.text)
            else:
                child = self.single_value_child(el)
                if child is None:
                    raise DecodeError(f"property '{name}' has no content", self.where)
                payload = TypedData(declared_type=declared, value=self.checked_value(child))
            return Property(name=name, ext=ext, payload=payload)
        finally:
            self.leave()

    def attachment(self, el: XmlElement) -> Attachment:
        self.enter(el)
        try:
            name = el.get("name") or ""
            declared = el.get("type")
            payload: Any
            if el.get("value") is not None:
                payload = ScalarValue(declared_type=declared, text=el.get("value"))
            elif declares_text(el):
                payload = TextPayload(text=el.text)
            else:
                child = self.single_value_child(el)
                if child is None or declared is None:
                    raise DecodeError(f"attachment '{name}' needs a type and a value", self.where)
                payload = ComplexValue(
                    declared_type=declared,
                    construct_type=el.get("construct"),
                    value=self.checked_value(child),
                )
            return Attachment(name=name, ext=el.get("ext"), payload=payload)
        finally:
            self.leave()

    def object(self, el: XmlElement, top: bool = False) -> ObjectNode:
        self.enter(el)
        try:
            description = None
            credits = []
            properties = []
            attachments = []
            for child in el.element_children:
                if child.name == "description":
                    description = child.text
                elif child.name == "credit":
                    credits.append(Credit(product=child.get("product") or "", text=child.text))
                elif child.name == "property":
                    properties.append(self.property(child))
                elif child.name == "attachment":
                    attachments.append(self.attachment(child))
                else:
                    raise DecodeError(f"unexpected element <{child.name}> in object", self.where)
            names = [a.name for a in attachments]
            for attachment_name in names:
                if names.count(attachment_name) > 1:
                    raise AttachmentNameError(attachment_name)
            return ObjectNode(
                name=el.get("name"),
                type_name=None if top else el.get("type"),
                ext=el.get("ext"),
                description=description,
                credits=tuple(credits),
                properties=tuple(properties),
                attachments=tuple(attachments),
            )
        finally:
            self.leave()

    def loose_data(self, el: XmlElement) -> LooseData:
        self.enter(el)
        try:
            description = None
            for child in el.element_children:
                if child.name == "description":
                    description = child.text
            data: Value
            if el.get("value") is not None:
                data = ScalarText(text=el.get("value"))
            else:
                child = self.single_value_child(el)
                if child is None:
                    raise DecodeError("data element has no value", self.where)
                data = self.checked_value(child)
            return LooseData(ext=el.get("ext"), description=description, data=data)
        finally:
            self.leave()


def decode(tree: XmlTree, opts: Optional[DecodeOptions] = None) -> Document:
    """
    Map an XmlTree onto the document model

    Raises:
        SchemaViolationError: Validation requested and failed
        ModelError: Duplicate ids, dangling references, sparse index or
            attachment name problems, or any other broken model invariant
        DecodeError: Unmappable structure (only without prior validation)
    """
    opts = opts or DecodeOptions()
    if opts.validate_first:
        report = validate(tree, polymake_schema(), lax=opts.lax_namespace)
        if not report.valid:
            raise SchemaViolationError(report)

    root = tree.root
    decoder = _Decoder()
    try:
        if root.name == "object":
            body: Any = decoder.object(root, top=True)
        elif root.name == "data":
            body = decoder.loose_data(root)
        else:
            raise DecodeError(f"unknown root element <{root.name}>", f"/{root.name}")
        document = Document(
            type_name=root.get("type") or "",
            version=root.get("version"),
            tm=_collapsed(root.get("tm")),
            pis=tuple(tree.leading_pis),
            body=body,
        )
    except ValidationError as e:
        raise ModelError(f"{decoder.where}: {e.errors()[0]['msg']}") from e
    logger.debug(f"Decoded {document.kind.value} document of type {document.type_name}")
    return document


# ============================================================================
# Encoding
# ============================================================================


def _element(name: str, attrs: dict[str, Optional[Any]], children=()) -> XmlElement:
    ordered = sorted(
        ((k, str(v)) for k, v in attrs.items() if v is not None),
        key=lambda kv: _ATTRIBUTE_RANK.get(kv[0], len(ATTRIBUTE_ORDER)),
    )
    return XmlElement(
        name=name, namespace=POLYMAKE_NAMESPACE, attributes=tuple(ordered), children=tuple(children)
    )


def _text(text: str) -> tuple:
    return (TextChild(text=text),) if text else ()


def _encode_vector(v: VectorV, index: Optional[int] = None) -> XmlElement:
    attrs = {"dim": v.dim, "i": index}
    if isinstance(v.entries, DenseText):
        return _element("v", attrs, _text(v.entries.raw))
    if isinstance(v.entries, SparseE):
        children = [_element("e", {"i": e.index}, _text(e.text)) for e in v.entries.entries]
        return _element("v", attrs, children)
    children = [_encode_tuple(e.item, e.index) for e in v.entries.entries]
    return _element("v", attrs, children)


def _encode_matrix(m: MatrixM) -> XmlElement:
    attrs = {"cols": m.cols, "dim": m.dim}
    rows = m.rows
    if isinstance(rows, DenseRows):
        children = [_encode_vector(r) for r in rows.rows]
    elif isinstance(rows, SparseRows):
        children = [_encode_vector(r.row, r.index) for r in rows.rows]
    elif isinstance(rows, MatrixRows):
        children = [_encode_matrix(r) for r in rows.rows]
    else:
        children = [_encode_tuple(r) for r in rows.rows]
    return _element("m", attrs, children)


def _encode_tuple(t: TupleV, index: Optional[int] = None) -> XmlElement:
    attrs = {"i": index, "id": t.id}
    if isinstance(t.items, RawText):
        return _element("t", attrs, _text(t.items.text))
    return _element("t", attrs, [_encode_value(item) for item in t.items.items])


def _encode_value(v: Value) -> XmlElement:
    if isinstance(v, VectorV):
        return _encode_vector(v)
    if isinstance(v, MatrixM):
        return _encode_matrix(v)
    if isinstance(v, TupleV):
        return _encode_tuple(v)
    if isinstance(v, RefR):
        return _element("r", {"id": v.id})
    if isinstance(v, ElementE):
        return _element("e", {}, _text(v.text))
    if isinstance(v, ObjectMatrix):
        return _element("m", {}, [_encode_object(o) for o in v.objects])
    raise TypeError(f"{type(v).__name__} cannot be nested in a container")


def _description(text: Optional[str]) -> list[XmlElement]:
    if text is None:
        return []
    return [_element("description", {}, (CDataChild(text=text),) if text else ())]


def _encode_property(p: Property) -> XmlElement:
    attrs: dict[str, Any] = {"name": p.name, "ext": p.ext}
    payload = p.payload
    if isinstance(payload, Undefined):
        return _element("property", {**attrs, "undef": "true"})
    if isinstance(payload, ScalarValue):
        return _element("property", {**attrs, "type": payload.declared_type, "value": payload.text})
    if isinstance(payload, TextPayload):
        return _element("property", {**attrs, "type": "text"}, _text(payload.text))
    if isinstance(payload, Subobjects):
        return _element("property", attrs, [_encode_object(o) for o in payload.objects])
    return _element(
        "property", {**attrs, "type": payload.declared_type}, [_encode_value(payload.value)]
    )


def _encode_attachment(a: Attachment) -> XmlElement:
    attrs: dict[str, Any] = {"name": a.name, "ext": a.ext}
    payload = a.payload
    if isinstance(payload, ScalarValue):
        return _element("attachment", {**attrs, "type": payload.declared_type, "value": payload.text})
    if isinstance(payload, TextPayload):
        return _element("attachment", {**attrs, "type": "text"}, _text(payload.text))
    return _element(
        "attachment",
        {**attrs, "type": payload.declared_type, "construct": payload.construct_type},
        [_encode_value(payload.value)],
    )


def _object_children(obj: ObjectNode) -> list[XmlElement]:
    children = _description(obj.description)
    children += [_element("credit", {"product": c.product}, _text(c.text)) for c in obj.credits]
    children += [_encode_property(p) for p in obj.properties]
    children += [_encode_attachment(a) for a in obj.attachments]
    return children


def _encode_object(obj: ObjectNode) -> XmlElement:
    attrs = {"name": obj.name, "type": obj.type_name, "ext": obj.ext}
    return _element("object", attrs, _object_children(obj))


def encode(doc: Document) -> XmlTree:
    """Canonical XmlTree for a Document"""
    top = {"type": doc.type_name, "version": doc.version, "tm": doc.tm}
    body = doc.body
    if isinstance(body, ObjectNode):
        root = _element("object", {**top, "name": body.name, "ext": body.ext}, _object_children(body))
    elif isinstance(body.data, ScalarText):
        root = _element("data", {**top, "ext": body.ext, "value": body.data.text}, _description(body.description))
    else:
        root = _element(
            "data",
            {**top, "ext": body.ext},
            _description(body.description) + [_encode_value(body.data)],
        )
    return XmlTree(root=root, leading_pis=doc.pis)


# ============================================================================
# JSON export
# ============================================================================


def _json_value(v: Value) -> Any:
    if isinstance(v, ScalarText):
        return {"value": v.text}
    if isinstance(v, VectorV):
        if isinstance(v.entries, DenseText):
            return tokenize_dense(v.entries.raw)
        if isinstance(v.entries, SparseE):
            return {"dim": v.dim, "entries": {str(e.index): e.text for e in v.entries.entries}}
        tuples = []
        for entry in v.entries.entries:
            item = _json_value(entry.item)
            tuples.append({"i": entry.index, **item} if entry.index is not None else item)
        return {"dim": v.dim, "tuples": tuples}
    if isinstance(v, MatrixM):
        rows = v.rows
        if isinstance(rows, DenseRows):
            return {"rows": [_json_value(r) for r in rows.rows], "cols": v.cols}
        if isinstance(rows, SparseRows):
            return {"rows": {str(r.index): _json_value(r.row) for r in rows.rows}, "dim": v.dim}
        if isinstance(rows, MatrixRows):
            return {"matrices": [_json_value(r) for r in rows.rows]}
        return {"tuples": [_json_value(r) for r in rows.rows]}
    if isinstance(v, TupleV):
        if isinstance(v.items, RawText):
            return {"id": v.id, "items": v.items.text}
        return {"id": v.id, "items": [_json_value(item) for item in v.items.items]}
    if isinstance(v, RefR):
        return {"ref": v.id}
    if isinstance(v, ElementE):
        return {"e": v.text}
    return {"objects": [_json_object(o) for o in v.objects]}


def _json_payload(payload: Any) -> dict[str, Any]:
    out: dict[str, Any] = {}
    declared = getattr(payload, "declared_type", None)
    if declared is not None:
        out["type"] = declared
    if isinstance(payload, Undefined):
        out["undef"] = True
    elif isinstance(payload, ScalarValue):
        out["value"] = payload.text
    elif isinstance(payload, TextPayload):
        out["text"] = payload.text
    elif isinstance(payload, Subobjects):
        out["objects"] = [_json_object(o) for o in payload.objects]
    else:
        if isinstance(payload, ComplexValue) and payload.construct_type is not None:
            out["construct"] = payload.construct_type
        out["data"] = _json_value(payload.value)
    return out


def _json_named(item: Any) -> dict[str, Any]:
    out: dict[str, Any] = {"name": item.name}
    out.update(_json_payload(item.payload))
    if item.ext is not None:
        out["ext"] = item.ext
    return out


def _json_object(obj: ObjectNode, top: Optional[dict[str, Any]] = None) -> dict[str, Any]:
    top = top or {}
    return {
        "kind": "object",
        "type": top.get("type", obj.type_name),
        "name": obj.name,
        "version": top.get("version"),
        "description": obj.description,
        "properties": [_json_named(p) for p in obj.properties],
        "attachments": [_json_named(a) for a in obj.attachments],
        "credits": [{"product": c.product, "text": c.text} for c in obj.credits],
        "ext": obj.ext,
        "tm": top.get("tm"),
    }


def to_json(doc: Document, indent: Optional[int] = None) -> str:
    """Deterministic JSON text for a Document"""
    body = doc.body
    if isinstance(body, ObjectNode):
        out = _json_object(body, {"type": doc.type_name, "version": doc.version, "tm": doc.tm})
    else:
        out = {
            "kind": "data",
            "type": doc.type_name,
            "version": doc.version,
            "description": body.description,
            "data": _json_value(body.data),
            "ext": body.ext,
            "tm": doc.tm,
        }
    separators = (",", ":") if indent is None else (",", ": ")
    return json.dumps(out, ensure_ascii=False, indent=indent, separators=separators)


# ============================================================================
# Canonical form
# ============================================================================

_OBJECT_CHILD_RANK = {"description": 0, "credit": 1, "property": 2, "attachment": 3}


def _canonical_integer(raw: str) -> str:
    try:
        return str(int(raw.strip()))
    except ValueError:
        return raw


def _canonical_attributes(el: XmlElement) -> tuple[tuple[str, str], ...]:
    text_payload = el.name in ("property", "attachment") and declares_text(el)
    attributes = []
    for name, value in el.attributes:
        if name in INTEGER_ATTRIBUTES:
            value = _canonical_integer(value)
        elif name in COLLAPSED_ATTRIBUTES:
            value = collapse_whitespace(value)
        elif name == "type" and text_payload:
            value = "text"
        attributes.append((name, value))
    return tuple(attributes)


def _canonical_element(el: XmlElement) -> XmlElement:
    children = [
        _canonical_element(c) if isinstance(c, XmlElement) else c for c in el.children
    ]
    if not holds_text(el):
        # only whitespace can stand here in a valid tree; encode never writes it
        children = [c for c in children if isinstance(c, XmlElement)]
    if el.name == "object":
        # sorted() is stable: properties keep their relative order
        children = sorted(
            children,
            key=lambda c: _OBJECT_CHILD_RANK.get(c.name, 4) if isinstance(c, XmlElement) else -1,
        )
    return el.model_copy(
        update={
            "namespace": POLYMAKE_NAMESPACE,
            "attributes": _canonical_attributes(el),
            "children": tuple(children),
        }
    )


def canonical_tree(tree: XmlTree) -> XmlTree:
    """
    The tree encode would produce for the same content, up to infoset equality

    Every element moves into the polymake namespace and object children are
    ordered description, credits, properties, attachments. Integer attributes
    take their shortest decimal form, `undef`, `tm` and a text `type` are
    whitespace-collapsed, and text is dropped wherever the grammar allows
    only elements or nothing.
    """
    return tree.model_copy(update={"root": _canonical_element(tree.root)})
