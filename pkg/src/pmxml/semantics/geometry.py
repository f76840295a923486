"""
Homogeneous coordinates and vertex/facet incidence

Points carry a leading homogenizing coordinate; an inequality vector
(a0, ..., an) reads a0 + a1*x1 + ... + an*xn >= 0, so a point satisfies it
exactly when the scalar product is nonnegative. All arithmetic is exact.
"""

import logging
import re
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pmxml.core.codec import DenseMatrix, densify_matrix
from pmxml.core.errors import DimensionMismatchError, PointAtInfinityError
from pmxml.core.models import MatrixM, ObjectNode, ScalarValue, TypedData, first_property
from pmxml.semantics.arith import Rational, parse_rational

logger = logging.getLogger(__name__)

_COUNT = re.compile(r"[0-9]+")


class HomPoint(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coords: tuple[Rational, ...] = Field(..., min_length=1)


class IneqVector(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: tuple[Rational, ...] = Field(..., min_length=1)


class IncidenceReport(BaseModel):
    """
    Products of every vertex with every facet

    products[i][j] is vertex i paired with facet j; incident marks the exact
    zeros and violations lists the (vertex, facet) pairs with a negative
    product.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    products: tuple[tuple[Rational, ...], ...] = ()
    incident: tuple[tuple[bool, ...], ...] = ()
    violations: tuple[tuple[int, int], ...] = ()

    @model_validator(mode="after")
    def _consistent(self) -> "IncidenceReport":
        negative = [
            (i, j) for i, row in enumerate(self.products) for j, x in enumerate(row) if x < 0
        ]
        if list(self.violations) != negative:
            raise ValueError("violations must list exactly the negative products")
        return self

    @property
    def vertex_count(self) -> int:
        return len(self.products)

    @property
    def facet_count(self) -> int:
        return len(self.products[0]) if self.products else 0

    @property
    def clean(self) -> bool:
        return not self.violations

    def facet_incidences(self, facet: int) -> list[int]:
        """Indices of the vertices lying on a facet"""
        return [i for i, row in enumerate(self.incident) if row[facet]]

    def vertex_incidences(self, vertex: int) -> list[int]:
        return [j for j, flag in enumerate(self.incident[vertex]) if flag]


def dehomogenize(p: HomPoint) -> list[Rational]:
    """
    Affine coordinates of a homogeneous point

    Raises:
        PointAtInfinityError: First coordinate is zero
    """
    head, *tail = p.coords
    if head == 0:
        raise PointAtInfinityError()
    return [x / head for x in tail]


def pairing(p: HomPoint, a: IneqVector) -> Rational:
    """
    Exact scalar product of a point and an inequality vector

    Raises:
        DimensionMismatchError: Lengths differ
    """
    if len(p.coords) != len(a.coeffs):
        raise DimensionMismatchError(len(p.coords), len(a.coeffs))
    return sum((x * y for x, y in zip(p.coords, a.coeffs)), Rational(0))


def points_of(m: DenseMatrix) -> list[HomPoint]:
    """Rows of a dense matrix parsed as homogeneous points"""
    return [HomPoint(coords=tuple(parse_rational(t) for t in row.entries)) for row in m.rows]


def inequalities_of(m: DenseMatrix) -> list[IneqVector]:
    return [IneqVector(coeffs=tuple(parse_rational(t) for t in row.entries)) for row in m.rows]


def incidence_check(vertices: DenseMatrix, facets: DenseMatrix) -> IncidenceReport:
    """
    Pair every vertex with every facet

    Raises:
        DimensionMismatchError: Both matrices have rows but differ in width
        RationalParseError: A token is not a rational
    """
    if vertices.rows and facets.rows and vertices.cols != facets.cols:
        raise DimensionMismatchError(vertices.cols, facets.cols)
    points = points_of(vertices)
    inequalities = inequalities_of(facets)
    products = tuple(tuple(pairing(p, a) for a in inequalities) for p in points)
    report = IncidenceReport(
        products=products,
        incident=tuple(tuple(x == 0 for x in row) for row in products),
        violations=tuple(
            (i, j) for i, row in enumerate(products) for j, x in enumerate(row) if x < 0
        ),
    )
    logger.debug(
        f"Incidence of {len(points)} vertices and {len(inequalities)} facets: "
        f"{len(report.violations)} violation(s)"
    )
    return report


def matrix_property(obj: ObjectNode, name: str) -> Optional[MatrixM]:
    """The matrix stored under a property name, if the object has one"""
    prop = first_property(obj, name)
    if prop is None or not isinstance(prop.payload, TypedData):
        return None
    value = prop.payload.value
    return value if isinstance(value, MatrixM) else None


def dense_matrix_property(obj: ObjectNode, name: str, zero: str = "0") -> Optional[DenseMatrix]:
    m = matrix_property(obj, name)
    return densify_matrix(m, zero) if m is not None else None


def _count_property(obj: ObjectNode, name: str) -> Optional[int]:
    prop = first_property(obj, name)
    if prop is None or not isinstance(prop.payload, ScalarValue):
        return None
    text = prop.payload.text.strip()
    if not _COUNT.fullmatch(text):
        logger.debug(f"{name}={text!r} is not a count; skipped")
        return None
    return int(text)


_COUNTED = (("N_FACETS", "FACETS"), ("N_VERTICES", "VERTICES"))


def check_counts(obj: ObjectNode) -> list[str]:
    """
    Compare stored counts with the row counts of the matrices they count

    Pairs where either side is missing or unreadable are not comparable and
    produce nothing.
    """
    discrepancies = []
    for count_name, matrix_name in _COUNTED:
        stored = _count_property(obj, count_name)
        m = matrix_property(obj, matrix_name)
        if stored is None or m is None:
            continue
        rows = m.row_count
        if stored != rows:
            discrepancies.append(
                f"{count_name} is {stored} but {matrix_name} has {rows} row(s)"
            )
    return discrepancies
