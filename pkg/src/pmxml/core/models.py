"""
Document model for polymake data

Typed, immutable mirror of the file format: objects with properties and
attachments, loose data, and the recursive Value tree (vectors, matrices,
tuples, references). Tokens are kept as exact strings; nothing here
interprets numbers.
"""

import logging
import re
from enum import Enum
from typing import Annotated, Literal, Optional, Sequence, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator

from pmxml.core.errors import (
    DanglingReferenceError,
    DuplicateIdError,
    MissingIdError,
)

logger = logging.getLogger(__name__)

SIMPLE_NAME = re.compile(r"[a-zA-Z][a-zA-Z_0-9]*")
TYPE_NAME = re.compile(r"[a-zA-Z][a-zA-Z_0-9]*::[^\n\r]*")
VERSION = re.compile(r"[0-9.]+")
HEX = re.compile(r"(?:[0-9a-fA-F]{2})*")
_XML_SPACE = re.compile(r"[ \t\n\r]+")


def split_tokens(raw: str) -> list[str]:
    """Split on runs of XML whitespace, ignoring leading and trailing runs"""
    return [token for token in _XML_SPACE.split(raw) if token]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class DocumentKind(str, Enum):
    """Root element of a data file"""
    TOP_OBJECT = "object"
    LOOSE_DATA = "data"


# ============================================================================
# Value tree
# ============================================================================


class ScalarText(_Frozen):
    """A scalar given by a `value` attribute on loose data"""

    kind: Literal["scalar"] = "scalar"
    text: str


class DenseText(_Frozen):
    kind: Literal["dense"] = "dense"
    raw: str


class SparseEntry(_Frozen):
    index: int = Field(..., ge=0)
    text: str


class SparseE(_Frozen):
    kind: Literal["sparse"] = "sparse"
    entries: tuple[SparseEntry, ...] = ()


class TupleEntry(_Frozen):
    index: Optional[int] = Field(default=None, ge=0)
    item: "TupleV"


class TupleEntries(_Frozen):
    kind: Literal["tuples"] = "tuples"
    entries: tuple[TupleEntry, ...] = Field(..., min_length=1)


VectorEntries = Annotated[Union[DenseText, SparseE, TupleEntries], Field(discriminator="kind")]


def _check_increasing(indices: Sequence[int], bound: Optional[int], what: str) -> None:
    for previous, current in zip(indices, indices[1:]):
        if current <= previous:
            raise ValueError(f"{what} indices must be strictly increasing ({previous}, {current})")
    if bound is not None and indices and indices[-1] >= bound:
        raise ValueError(f"{what} index {indices[-1]} out of range for dim {bound}")


class VectorV(_Frozen):
    """`<v>`: dense text, sparse `e` entries or (indexed) tuples"""

    kind: Literal["vector"] = "vector"
    dim: Optional[int] = Field(default=None, ge=0)
    entries: VectorEntries = Field(default_factory=lambda: DenseText(raw=""))

    @model_validator(mode="after")
    def _check_entries(self) -> "VectorV":
        if isinstance(self.entries, DenseText):
            if self.dim is not None:
                raise ValueError("dense vectors carry no dim")
        elif isinstance(self.entries, SparseE):
            if not self.entries.entries and self.dim is None:
                raise ValueError("an empty sparse vector needs a dim")
            _check_increasing([e.index for e in self.entries.entries], self.dim, "sparse")
        else:
            indices = [e.index for e in self.entries.entries if e.index is not None]
            if self.dim is not None and indices and max(indices) >= self.dim:
                raise ValueError(f"tuple index {max(indices)} out of range for dim {self.dim}")
        return self

    @property
    def is_sparse(self) -> bool:
        return isinstance(self.entries, SparseE)


class IndexedRow(_Frozen):
    index: int = Field(..., ge=0)
    row: VectorV


class DenseRows(_Frozen):
    kind: Literal["dense_rows"] = "dense_rows"
    rows: tuple[VectorV, ...] = ()


class SparseRows(_Frozen):
    kind: Literal["sparse_rows"] = "sparse_rows"
    rows: tuple[IndexedRow, ...] = ()


class MatrixRows(_Frozen):
    kind: Literal["matrix_rows"] = "matrix_rows"
    rows: tuple["MatrixM", ...] = Field(..., min_length=1)


class TupleRows(_Frozen):
    kind: Literal["tuple_rows"] = "tuple_rows"
    rows: tuple["TupleV", ...] = Field(..., min_length=1)


MatrixBody = Annotated[
    Union[DenseRows, SparseRows, MatrixRows, TupleRows], Field(discriminator="kind")
]


class MatrixM(_Frozen):
    """`<m>`: dense rows, sparse indexed rows, nested matrices or tuples"""

    kind: Literal["matrix"] = "matrix"
    cols: Optional[int] = Field(default=None, ge=0)
    dim: Optional[int] = Field(default=None, ge=0)
    rows: MatrixBody = Field(default_factory=DenseRows)

    @model_validator(mode="after")
    def _check_rows(self) -> "MatrixM":
        if isinstance(self.rows, SparseRows):
            if self.dim is None:
                raise ValueError("sparse rows require dim")
            if self.cols is not None:
                raise ValueError("sparse rows carry no cols")
            _check_increasing([r.index for r in self.rows.rows], self.dim, "row")
            return self
        if self.dim is not None:
            raise ValueError("dim is only allowed with sparse rows")
        if isinstance(self.rows, DenseRows):
            if self.cols is not None:
                for row in self.rows.rows:
                    if isinstance(row.entries, DenseText):
                        width = len(split_tokens(row.entries.raw))
                        if width != self.cols:
                            raise ValueError(f"dense row of width {width} in matrix with cols={self.cols}")
        elif self.cols is not None:
            raise ValueError("cols is only allowed with dense rows")
        return self

    @property
    def row_count(self) -> int:
        if isinstance(self.rows, SparseRows):
            return self.dim or 0
        return len(self.rows.rows)


class RawText(_Frozen):
    kind: Literal["raw"] = "raw"
    text: str


class ElementE(_Frozen):
    """Scalar `<e>` entry inside a tuple"""

    kind: Literal["e"] = "e"
    text: str


class RefR(_Frozen):
    """`<r id="..."/>`: stands for the tuple with that id"""

    kind: Literal["ref"] = "ref"
    id: Optional[int] = Field(default=None, ge=0)


TupleItem = Annotated[
    Union[VectorV, MatrixM, "TupleV", RefR, ElementE], Field(discriminator="kind")
]


class ItemList(_Frozen):
    kind: Literal["items"] = "items"
    items: tuple[TupleItem, ...] = Field(..., min_length=1)


class TupleV(_Frozen):
    """`<t>`: raw text or a list of items, optionally carrying an id"""

    kind: Literal["tuple"] = "tuple"
    id: Optional[int] = Field(default=None, ge=0)
    items: Annotated[Union[RawText, ItemList], Field(discriminator="kind")] = Field(
        default_factory=lambda: RawText(text="")
    )


class ObjectMatrix(_Frozen):
    """`<m>` holding whole objects (an array of subobjects)"""

    kind: Literal["object_matrix"] = "object_matrix"
    objects: tuple["ObjectNode", ...] = Field(..., min_length=1)


ContainerValue = Annotated[Union[VectorV, MatrixM, TupleV], Field(discriminator="kind")]
DataValue = Annotated[
    Union[ScalarText, VectorV, MatrixM, TupleV, RefR, ObjectMatrix], Field(discriminator="kind")
]
Value = Union[ScalarText, VectorV, MatrixM, TupleV, RefR, ElementE, ObjectMatrix]


# ============================================================================
# Properties and attachments
# ============================================================================


class Undefined(_Frozen):
    kind: Literal["undef"] = "undef"


class ScalarValue(_Frozen):
    kind: Literal["value"] = "value"
    declared_type: Optional[str] = None
    text: str


class TypedData(_Frozen):
    kind: Literal["data"] = "data"
    declared_type: Optional[str] = None
    value: DataValue


class TextPayload(_Frozen):
    kind: Literal["text"] = "text"
    text: str = ""


class Subobjects(_Frozen):
    kind: Literal["objects"] = "objects"
    objects: tuple["ObjectNode", ...] = Field(..., min_length=1)


class ComplexValue(_Frozen):
    kind: Literal["complex"] = "complex"
    declared_type: str
    construct_type: Optional[str] = Field(default=None, description="The `construct` attribute")
    value: ContainerValue


PropertyPayload = Annotated[
    Union[Undefined, ScalarValue, TypedData, TextPayload, Subobjects], Field(discriminator="kind")
]
AttachmentPayload = Annotated[
    Union[ScalarValue, ComplexValue, TextPayload], Field(discriminator="kind")
]


def _simple_name(v: str) -> str:
    if not SIMPLE_NAME.fullmatch(v):
        raise ValueError(f"'{v}' is not a simple name")
    return v


SimpleName = Annotated[str, AfterValidator(_simple_name)]


class Property(_Frozen):
    name: SimpleName
    ext: Optional[str] = None
    payload: PropertyPayload


class Attachment(_Frozen):
    name: SimpleName
    ext: Optional[str] = None
    payload: AttachmentPayload


class Credit(_Frozen):
    product: str
    text: str = ""


class ObjectNode(_Frozen):
    kind: Literal["object"] = "object"
    name: Optional[str] = None
    type_name: Optional[str] = Field(default=None, description="Subobjects only")
    ext: Optional[str] = None
    description: Optional[str] = None
    credits: tuple[Credit, ...] = ()
    properties: tuple[Property, ...] = ()
    attachments: tuple[Attachment, ...] = ()

    @model_validator(mode="after")
    def _unique_attachments(self) -> "ObjectNode":
        seen: set[str] = set()
        for attachment in self.attachments:
            if attachment.name in seen:
                raise ValueError(f"attachment name '{attachment.name}' is not unique")
            seen.add(attachment.name)
        return self


class LooseData(_Frozen):
    kind: Literal["data"] = "data"
    ext: Optional[str] = None
    description: Optional[str] = None
    data: DataValue


class Document(_Frozen):
    """A whole data file"""

    type_name: str
    version: Optional[str] = None
    tm: Optional[str] = None
    pis: tuple[tuple[str, str], ...] = ()
    body: Annotated[Union[ObjectNode, LooseData], Field(discriminator="kind")]

    @model_validator(mode="after")
    def _check_metadata(self) -> "Document":
        if isinstance(self.body, ObjectNode):
            if not TYPE_NAME.fullmatch(self.type_name):
                raise ValueError(f"object type '{self.type_name}' lacks an application prefix")
            if self.body.type_name is not None:
                raise ValueError("the top-level object takes its type from the document")
        if self.version is not None and not VERSION.fullmatch(self.version):
            raise ValueError(f"invalid version '{self.version}'")
        if self.tm is not None and not HEX.fullmatch(self.tm):
            raise ValueError(f"tm must be an even-length hex string, got '{self.tm}'")
        return self

    @property
    def kind(self) -> DocumentKind:
        if isinstance(self.body, ObjectNode):
            return DocumentKind.TOP_OBJECT
        return DocumentKind.LOOSE_DATA

    @property
    def ext(self) -> Optional[str]:
        return self.body.ext


for _model in (TupleEntry, TupleEntries, VectorV, MatrixRows, TupleRows, MatrixM, ItemList,
               TupleV, ObjectMatrix, TypedData, Subobjects, ComplexValue, Property,
               Attachment, ObjectNode, LooseData, Document):
    _model.model_rebuild()


# ============================================================================
# Queries
# ============================================================================


def find_properties(obj: ObjectNode, name: str) -> list[Property]:
    """All properties named `name`, in document order"""
    return [p for p in obj.properties if p.name == name]


def first_property(obj: ObjectNode, name: str) -> Optional[Property]:
    found = find_properties(obj, name)
    return found[0] if found else None


NodePath = tuple[int, ...]


def value_children(v: Value) -> list[Value]:
    """Direct children of a value node, in the order paths index them"""
    if isinstance(v, VectorV):
        if isinstance(v.entries, TupleEntries):
            return [e.item for e in v.entries.entries]
        return []
    if isinstance(v, MatrixM):
        if isinstance(v.rows, SparseRows):
            return [r.row for r in v.rows.rows]
        return list(v.rows.rows)
    if isinstance(v, TupleV) and isinstance(v.items, ItemList):
        return list(v.items.items)
    return []


def value_at(root: Value, path: Sequence[int]) -> Value:
    """Node reached from root by a sequence of child indices"""
    node = root
    for step in path:
        node = value_children(node)[step]
    return node


def walk_values(root: Value, path: NodePath = ()):
    """Yield (path, node) for every node of the value tree, preorder"""
    yield path, root
    for index, child in enumerate(value_children(root)):
        yield from walk_values(child, path + (index,))


class IdTable(_Frozen):
    """Tuple ids of one value tree mapped to their paths (and nodes)"""

    paths: dict[int, NodePath] = Field(default_factory=dict)
    nodes: dict[int, TupleV] = Field(default_factory=dict)

    def __contains__(self, id: int) -> bool:
        return id in self.paths

    def __len__(self) -> int:
        return len(self.paths)


def collect_ids(v: Value) -> IdTable:
    """
    Record the path of every tuple carrying an id

    Raises:
        DuplicateIdError: If an id occurs twice in the tree
    """
    paths: dict[int, NodePath] = {}
    nodes: dict[int, TupleV] = {}
    for path, node in walk_values(v):
        if isinstance(node, TupleV) and node.id is not None:
            if node.id in paths:
                raise DuplicateIdError(node.id, paths[node.id], path)
            paths[node.id] = path
            nodes[node.id] = node
    return IdTable(paths=paths, nodes=nodes)


def resolve_reference(table: IdTable, r: RefR) -> NodePath:
    """
    Path of the tuple a reference stands for

    Raises:
        MissingIdError: If the reference has no id
        DanglingReferenceError: If no tuple carries the id
    """
    if r.id is None:
        raise MissingIdError()
    if r.id not in table.paths:
        raise DanglingReferenceError(r.id)
    return table.paths[r.id]


def lookup_reference(table: IdTable, r: RefR) -> TupleV:
    """The tuple a reference stands for"""
    resolve_reference(table, r)
    return table.nodes[r.id]  # type: ignore[index]


def nested_references(v: Value) -> list[RefR]:
    """References inside a container value (the root itself excluded)"""
    return [node for path, node in walk_values(v) if path and isinstance(node, RefR)]
