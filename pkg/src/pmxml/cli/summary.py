"""
Human-readable document summaries for `pmxml inspect`
"""

import logging
from typing import Any

from pmxml.core.codec import matrix_width, tokenize_dense
from pmxml.core.errors import PmxmlError
from pmxml.core.models import (
    ComplexValue,
    DenseRows,
    DenseText,
    Document,
    MatrixM,
    MatrixRows,
    ObjectMatrix,
    ObjectNode,
    RawText,
    RefR,
    ScalarText,
    ScalarValue,
    SparseE,
    SparseRows,
    Subobjects,
    TextPayload,
    TupleEntries,
    TupleV,
    TypedData,
    Undefined,
    Value,
    VectorV,
)
from pmxml.core.template_engine import get_engine

logger = logging.getLogger(__name__)


def _count(n: int, noun: str, plural: str = "") -> str:
    return f"{n} {noun if n == 1 else (plural or noun + 's')}"


def _describe_vector(v: VectorV) -> str:
    if isinstance(v.entries, DenseText):
        return f"vector {len(tokenize_dense(v.entries.raw))} dense"
    if isinstance(v.entries, SparseE):
        if v.dim is None:
            return f"vector sparse ({_count(len(v.entries.entries), 'entry', 'entries')})"
        return f"vector {v.dim} sparse"
    return f"vector of {_count(len(v.entries.entries), 'tuple')}"


def _describe_matrix(m: MatrixM) -> str:
    rows = m.rows
    if isinstance(rows, MatrixRows):
        return f"matrix of {_count(len(rows.rows), 'matrix', 'matrices')}"
    if not isinstance(rows, (DenseRows, SparseRows)):
        return f"matrix of {_count(len(rows.rows), 'tuple')}"
    if isinstance(rows, DenseRows) and not rows.rows:
        return "matrix 0×0"
    try:
        width = matrix_width(m)
    except PmxmlError:
        width = None
    columns = "?" if width is None else str(width)
    sparse = isinstance(rows, SparseRows) or any(r.is_sparse for r in rows.rows)
    return f"matrix {m.row_count}×{columns} {'sparse' if sparse else 'dense'}"


def describe_value(v: Value) -> str:
    """Kind and shape of a value, e.g. `matrix 4×3 dense`"""
    if isinstance(v, ScalarText):
        return f"scalar {v.text}"
    if isinstance(v, VectorV):
        return _describe_vector(v)
    if isinstance(v, MatrixM):
        return _describe_matrix(v)
    if isinstance(v, TupleV):
        if isinstance(v.items, RawText):
            count = len(tokenize_dense(v.items.text))
        else:
            count = len(v.items.items)
        return f"tuple of {_count(count, 'item')}"
    if isinstance(v, RefR):
        return "reference without id" if v.id is None else f"reference #{v.id}"
    if isinstance(v, ObjectMatrix):
        return f"array of {_count(len(v.objects), 'object')}"
    return f"element {v.text}"


def describe_payload(payload: Any) -> str:
    if isinstance(payload, Undefined):
        return "undefined"
    if isinstance(payload, ScalarValue):
        return f"scalar {payload.text}"
    if isinstance(payload, TextPayload):
        return f"text ({_count(len(payload.text), 'char')})"
    if isinstance(payload, Subobjects):
        return _count(len(payload.objects), "subobject")
    if isinstance(payload, (TypedData, ComplexValue)):
        return describe_value(payload.value)
    raise TypeError(f"not a payload: {payload!r}")


def render_summary(doc: Document) -> str:
    """The `inspect` report for a document"""
    body = doc.body
    context: dict[str, Any] = {
        "kind": doc.kind.value,
        "type_name": doc.type_name,
        "version": doc.version,
        "description": body.description,
        "name": None,
        "credits": [],
        "properties": [],
        "attachments": [],
        "data_shape": None,
    }
    if isinstance(body, ObjectNode):
        context["name"] = body.name
        context["credits"] = [(c.product, c.text.strip()) for c in body.credits]
        context["properties"] = [f"{p.name}: {describe_payload(p.payload)}" for p in body.properties]
        context["attachments"] = [f"{a.name}: {describe_payload(a.payload)}" for a in body.attachments]
    else:
        context["data_shape"] = describe_value(body.data)
    return get_engine().render_template("inspect.txt.j2", context)
