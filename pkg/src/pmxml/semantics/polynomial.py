"""
Polynomials with quadratic-extension coefficients

A polynomial is stored as a tuple of two items: a matrix of (exponent
vector, coefficient) tuples and a tuple of variable names. The names may be
given inline or as a reference to a tuple elsewhere in the same value tree.
"""

import logging
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pmxml.core.codec import densify_vector, tokenize_dense
from pmxml.core.errors import ShapeError
from pmxml.core.models import (
    DenseRows,
    DenseText,
    IdTable,
    ItemList,
    MatrixM,
    RawText,
    RefR,
    TupleEntries,
    TupleRows,
    TupleV,
    Value,
    VectorV,
    collect_ids,
    lookup_reference,
)
from pmxml.semantics.arith import QuadExt, format_quad, quad_from_value

logger = logging.getLogger(__name__)


class Term(BaseModel):
    model_config = ConfigDict(frozen=True)

    exponents: tuple[int, ...]
    coefficient: QuadExt


class Polynomial(BaseModel):
    """Terms in document order over named variables"""

    model_config = ConfigDict(frozen=True)

    terms: tuple[Term, ...] = ()
    variables: tuple[str, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_terms(self) -> "Polynomial":
        seen: set[tuple[int, ...]] = set()
        for term in self.terms:
            if len(term.exponents) != len(self.variables):
                raise ValueError(
                    f"exponent vector of length {len(term.exponents)} "
                    f"for {len(self.variables)} variable(s)"
                )
            if any(e < 0 for e in term.exponents):
                raise ValueError(f"negative exponent in {term.exponents}")
            if term.exponents in seen:
                raise ValueError(f"exponent vector {term.exponents} occurs twice")
            seen.add(term.exponents)
        return self

    def coefficient(self, exponents: Sequence[int]) -> Optional[QuadExt]:
        for term in self.terms:
            if term.exponents == tuple(exponents):
                return term.coefficient
        return None

    def __str__(self) -> str:
        return render_polynomial(self)


def _items(t: TupleV, what: str) -> tuple[Value, ...]:
    if not isinstance(t.items, ItemList):
        raise ShapeError(f"{what} must hold elements, not raw text")
    return t.items.items


def _variables(v: Value, table: IdTable) -> tuple[str, ...]:
    if isinstance(v, RefR):
        v = lookup_reference(table, v)
    if not isinstance(v, TupleV):
        raise ShapeError("variable names must be a tuple", type(v).__name__)
    if isinstance(v.items, RawText):
        return tuple(tokenize_dense(v.items.text))
    items = v.items.items
    if len(items) != 1 or not isinstance(items[0], VectorV):
        raise ShapeError("variable tuple must hold one vector of names")
    names = items[0]
    if not isinstance(names.entries, DenseText):
        raise ShapeError("variable names must be a dense vector")
    return tuple(tokenize_dense(names.entries.raw))


def _exponents(v: Value, count: int) -> tuple[int, ...]:
    if not isinstance(v, VectorV):
        raise ShapeError("exponents must be a vector", type(v).__name__)
    tokens = densify_vector(v, length_hint=count).entries
    if len(tokens) != count:
        raise ShapeError(f"exponent vector of length {len(tokens)} for {count} variable(s)")
    exponents = []
    for token in tokens:
        if not token.isascii() or not token.isdigit():
            raise ShapeError("exponents must be nonnegative integers", token)
        exponents.append(int(token))
    return tuple(exponents)


def _term_rows(m: MatrixM) -> tuple[TupleV, ...]:
    if isinstance(m.rows, TupleRows):
        return m.rows.rows
    if isinstance(m.rows, DenseRows) and not m.rows.rows:
        return ()
    raise ShapeError("terms must be a matrix of tuples")


def decode_polynomial(t: TupleV, table: IdTable) -> Polynomial:
    """
    Interpret a (terms, variables) tuple

    `table` holds the ids of the value tree t belongs to; it resolves a
    variable tuple given as a reference.

    Raises:
        ShapeError: Wrong arity or nesting
        DanglingReferenceError: Variable reference names an unknown id
        RationalParseError: Coefficient entries are not rationals
    """
    items = _items(t, "a polynomial")
    if len(items) != 2:
        raise ShapeError(f"a polynomial has 2 items, got {len(items)}")
    terms_value, variables_value = items
    if not isinstance(terms_value, MatrixM):
        raise ShapeError("polynomial terms must be a matrix", type(terms_value).__name__)
    variables = _variables(variables_value, table)

    terms = []
    for row in _term_rows(terms_value):
        pair = _items(row, "a term")
        if len(pair) != 2:
            raise ShapeError(f"a term has 2 items, got {len(pair)}")
        exponents = _exponents(pair[0], len(variables))
        terms.append(Term(exponents=exponents, coefficient=quad_from_value(pair[1])))
    try:
        return Polynomial(terms=tuple(terms), variables=variables)
    except ValueError as e:
        raise ShapeError("inconsistent polynomial", str(e)) from e


def decode_polynomials(value: Value) -> list[Polynomial]:
    """
    Every polynomial in a loose-data value

    Accepts a single polynomial tuple or a vector of them (an array). Ids are
    collected over the whole value so polynomials can share variable names.
    """
    table = collect_ids(value)
    if isinstance(value, TupleV):
        return [decode_polynomial(value, table)]
    if isinstance(value, VectorV) and isinstance(value.entries, TupleEntries):
        return [decode_polynomial(entry.item, table) for entry in value.entries.entries]
    raise ShapeError("expected a polynomial or an array of polynomials", type(value).__name__)


def _monomial(exponents: Sequence[int], variables: Sequence[str]) -> list[str]:
    factors = []
    for name, exponent in zip(variables, exponents):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return factors


def render_polynomial(p: Polynomial) -> str:
    """
    Text form of a polynomial, terms in document order

    A coefficient prints as a rational, `b√c` or `(a+b√c)`; a term with no
    variable factors is its coefficient alone; no terms print as `0`.
    """
    if not p.terms:
        return "0"
    rendered = []
    for term in p.terms:
        coefficient = format_quad(term.coefficient)
        factors = _monomial(term.exponents, p.variables)
        rendered.append("*".join([coefficient, *factors]))
    return " + ".join(rendered)
