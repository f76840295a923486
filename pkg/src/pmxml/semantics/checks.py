"""
Semantic checks

Each check compares stored data with what other stored data implies:
vertex/facet incidence, stored counts, triangulation indices, reference
ids and decodable polynomials. default_runtime() registers them all in
the order the `check` command reports them.
"""

import logging
from typing import Iterator, Optional

from pmxml.core.check_runtime import BaseCheck, CheckContext, CheckOutcome, CheckRuntime
from pmxml.core.codec import densify_matrix, densify_vector
from pmxml.core.errors import PmxmlError
from pmxml.core.models import (
    ComplexValue,
    Document,
    LooseData,
    ObjectMatrix,
    ObjectNode,
    RefR,
    Subobjects,
    TupleEntries,
    TupleV,
    TypedData,
    Value,
    VectorV,
    collect_ids,
    find_properties,
    first_property,
    walk_values,
)
from pmxml.semantics.arith import quad_approx
from pmxml.semantics.geometry import (
    check_counts,
    dense_matrix_property,
    incidence_check,
    matrix_property,
)
from pmxml.semantics.polynomial import decode_polynomial, render_polynomial

logger = logging.getLogger(__name__)


def _top_object(doc: Document) -> Optional[ObjectNode]:
    return doc.body if isinstance(doc.body, ObjectNode) else None


class IncidenceCheck(BaseCheck):
    """Every vertex must satisfy every facet inequality"""

    @property
    def name(self) -> str:
        return "incidence"

    @property
    def description(self) -> str:
        return "VERTICES x FACETS products are nonnegative"

    def applies_to(self, doc: Document) -> bool:
        obj = _top_object(doc)
        return obj is not None and all(
            matrix_property(obj, name) is not None for name in ("VERTICES", "FACETS")
        )

    def run(self, doc: Document, context: CheckContext) -> CheckOutcome:
        obj = _top_object(doc)
        assert obj is not None
        vertices = dense_matrix_property(obj, "VERTICES", context.zero_token)
        facets = dense_matrix_property(obj, "FACETS", context.zero_token)
        assert vertices is not None and facets is not None
        report = incidence_check(vertices, facets)

        total = report.vertex_count * report.facet_count
        nonnegative = total - len(report.violations)
        outcome = CheckOutcome(notes=[f"{nonnegative}/{total} products >= 0"])
        for i, j in report.violations:
            outcome.discrepancies.append(
                f"vertex {i} violates facet {j}: product {report.products[i][j]}"
            )
        return outcome


class CountsCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "counts"

    @property
    def description(self) -> str:
        return "N_FACETS and N_VERTICES match the stored matrices"

    def applies_to(self, doc: Document) -> bool:
        return _top_object(doc) is not None

    def run(self, doc: Document, context: CheckContext) -> CheckOutcome:
        obj = _top_object(doc)
        assert obj is not None
        return CheckOutcome(discrepancies=check_counts(obj))


class TriangulationCheck(BaseCheck):
    """
    Triangulation subobjects index the rows of the parent's VERTICES

    Per subobject: FACETS entries must be vertex indices in range, F_VECTOR
    must start with the number of distinct vertices used and end with the
    number of facets. Subobject names must be unique within the property.
    """

    @property
    def name(self) -> str:
        return "triangulation"

    @property
    def description(self) -> str:
        return "TRIANGULATION indices and face counts are consistent"

    def applies_to(self, doc: Document) -> bool:
        obj = _top_object(doc)
        return obj is not None and bool(find_properties(obj, "TRIANGULATION"))

    def run(self, doc: Document, context: CheckContext) -> CheckOutcome:
        obj = _top_object(doc)
        assert obj is not None
        vertices = matrix_property(obj, "VERTICES")
        vertex_count = vertices.row_count if vertices is not None else None
        outcome = CheckOutcome()
        if vertex_count is None:
            outcome.notes.append("no VERTICES; index range not checked")

        for prop in find_properties(obj, "TRIANGULATION"):
            if not isinstance(prop.payload, Subobjects):
                continue
            names = [sub.name for sub in prop.payload.objects if sub.name is not None]
            for duplicate in sorted({n for n in names if names.count(n) > 1}):
                outcome.discrepancies.append(f"subobject name '{duplicate}' is not unique")
            for position, sub in enumerate(prop.payload.objects):
                label = sub.name or f"#{position}"
                self._check_subobject(sub, label, vertex_count, context, outcome)
        return outcome

    def _check_subobject(
        self,
        sub: ObjectNode,
        label: str,
        vertex_count: Optional[int],
        context: CheckContext,
        outcome: CheckOutcome,
    ) -> None:
        facets = matrix_property(sub, "FACETS")
        if facets is None:
            outcome.notes.append(f"{label}: no FACETS")
            return
        rows = densify_matrix(facets, context.zero_token).rows
        used: set[int] = set()
        for r, row in enumerate(rows):
            for token in row.entries:
                if not (token.isascii() and token.isdigit()):
                    outcome.discrepancies.append(f"{label}: FACETS row {r} entry {token!r} is not an index")
                    continue
                index = int(token)
                used.add(index)
                if vertex_count is not None and index >= vertex_count:
                    outcome.discrepancies.append(
                        f"{label}: FACETS row {r} index {index} out of range for {vertex_count} vertices"
                    )
        outcome.notes.append(f"{label}: {len(rows)} facet(s) on {len(used)} vertices")

        f_vector = first_property(sub, "F_VECTOR")
        if f_vector is None or not isinstance(f_vector.payload, TypedData):
            return
        if not isinstance(f_vector.payload.value, VectorV):
            outcome.discrepancies.append(f"{label}: F_VECTOR is not a vector")
            return
        counts = densify_vector(f_vector.payload.value, zero=context.zero_token).entries
        if not counts:
            outcome.discrepancies.append(f"{label}: F_VECTOR is empty")
            return
        expected = (("first", counts[0], len(used), "distinct vertices"),
                    ("last", counts[-1], len(rows), "facets"))
        for which, stored, actual, what in expected:
            if not (stored.isascii() and stored.isdigit() and int(stored) == actual):
                outcome.discrepancies.append(
                    f"{label}: F_VECTOR {which} entry {stored} but {actual} {what}"
                )


def _object_values(obj: ObjectNode, where: str) -> Iterator[tuple[str, Value]]:
    for prop in obj.properties:
        payload = prop.payload
        if isinstance(payload, TypedData):
            yield from _nested_values(payload.value, f"{where}{prop.name}")
        elif isinstance(payload, Subobjects):
            for position, sub in enumerate(payload.objects):
                yield from _object_values(sub, f"{where}{prop.name}[{position}]/")
    for attachment in obj.attachments:
        if isinstance(attachment.payload, ComplexValue):
            yield from _nested_values(attachment.payload.value, f"{where}{attachment.name}")


def _nested_values(root: Value, where: str) -> Iterator[tuple[str, Value]]:
    if isinstance(root, ObjectMatrix):
        for position, sub in enumerate(root.objects):
            yield from _object_values(sub, f"{where}[{position}]/")
        return
    for _, node in walk_values(root):
        yield where, node


def document_values(doc: Document) -> Iterator[tuple[str, Value]]:
    """(location, node) for every value node of the document"""
    if isinstance(doc.body, LooseData):
        yield from _nested_values(doc.body.data, "data")
    else:
        yield from _object_values(doc.body, "")


class ReferencesCheck(BaseCheck):
    @property
    def name(self) -> str:
        return "references"

    @property
    def description(self) -> str:
        return "every <r/> carries an id"

    def run(self, doc: Document, context: CheckContext) -> CheckOutcome:
        outcome = CheckOutcome()
        for where, node in document_values(doc):
            if isinstance(node, RefR) and node.id is None:
                outcome.discrepancies.append(f"{where}: reference without id")
        return outcome


class PolynomialsCheck(BaseCheck):
    """Loose data typed as polynomials must decode, polynomial by polynomial"""

    @property
    def name(self) -> str:
        return "polynomials"

    @property
    def description(self) -> str:
        return "polynomial data decodes"

    def applies_to(self, doc: Document) -> bool:
        return isinstance(doc.body, LooseData) and "Polynomial" in doc.type_name

    def run(self, doc: Document, context: CheckContext) -> CheckOutcome:
        assert isinstance(doc.body, LooseData)
        value = doc.body.data
        table = collect_ids(value)
        if isinstance(value, VectorV) and isinstance(value.entries, TupleEntries):
            candidates = [entry.item for entry in value.entries.entries]
        else:
            candidates = [value]

        outcome = CheckOutcome()
        for position, candidate in enumerate(candidates):
            if not isinstance(candidate, TupleV):
                outcome.discrepancies.append(f"polynomial {position}: not a tuple")
                continue
            try:
                polynomial = decode_polynomial(candidate, table)
            except PmxmlError as e:
                outcome.discrepancies.append(f"polynomial {position}: {e}")
                continue
            outcome.notes.append(f"polynomial {position}: {render_polynomial(polynomial)}")
            for term in polynomial.terms:
                if not term.coefficient.is_rational:
                    approx = quad_approx(term.coefficient, context.approx_digits)
                    outcome.notes.append(f"  {term.coefficient} ~ {approx}")
        return outcome


def default_checks() -> list[BaseCheck]:
    return [
        IncidenceCheck(),
        CountsCheck(),
        TriangulationCheck(),
        ReferencesCheck(),
        PolynomialsCheck(),
    ]


def default_runtime(context: Optional[CheckContext] = None) -> CheckRuntime:
    """A runtime with every built-in check registered"""
    runtime = CheckRuntime(context)
    for check in default_checks():
        runtime.register_check(check)
    return runtime
