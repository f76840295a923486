"""
Unit tests for polynomial decoding and rendering
"""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from pmxml.core.codec import decode
from pmxml.core.errors import DanglingReferenceError, RationalParseError, ShapeError
from pmxml.core.infoset import read_document
from pmxml.core.models import ItemList, MatrixM, RefR, ScalarText, TupleV, collect_ids
from pmxml.schema.grammar import POLYMAKE_NAMESPACE
from pmxml.semantics.arith import QuadExt
from pmxml.semantics.polynomial import (
    Polynomial,
    Term,
    decode_polynomial,
    decode_polynomials,
    render_polynomial,
)


def loose_value(body: str):
    text = f'<data type="Polynomial" xmlns="{POLYMAKE_NAMESPACE}">{body}</data>'
    return decode(read_document(text.encode("utf-8"))).body.data


def term(exponents, a, b=0, c=0) -> Term:
    return Term(exponents=tuple(exponents), coefficient=QuadExt(a=a, b=b, c=c))


class TestDecodePolynomials:
    """Tests for decoding polynomial tuples"""

    def test_fixture(self, polynomial_doc):
        (p,) = decode_polynomials(polynomial_doc.body.data)
        assert p.variables == ("x", "y")
        assert [t.exponents for t in p.terms] == [(2, 0), (0, 3)]
        assert p.coefficient((2, 0)) == QuadExt(a=0, b=Fraction(1, 5), c=5)
        assert p.coefficient((0, 3)) == QuadExt(a=-1)
        assert p.coefficient((1, 1)) is None

    def test_variables_by_reference(self):
        value = loose_value(
            "<v>"
            '<t><m><t><v>1 0</v><t>2 0 0</t></t></m><t id="1"><v>x y</v></t></t>'
            '<t><m><t><v>0 1</v><e>-1/2</e></t></m><r id="1"/></t>'
            "</v>"
        )
        first, second = decode_polynomials(value)
        assert second.variables == first.variables == ("x", "y")
        assert render_polynomial(second) == "-1/2*y"

    def test_raw_variable_names(self):
        value = loose_value("<t><m><t><v>3</v><e>4</e></t></m><t>z</t></t>")
        (p,) = decode_polynomials(value)
        assert p.variables == ("z",)
        assert str(p) == "4*z^3"

    def test_zero_polynomial(self):
        (p,) = decode_polynomials(loose_value("<t><m/><t>x</t></t>"))
        assert p.terms == ()
        assert render_polynomial(p) == "0"

    def test_dangling_variables(self):
        value = TupleV(items=ItemList(items=(MatrixM(), RefR(id=4))))
        with pytest.raises(DanglingReferenceError):
            decode_polynomial(value, collect_ids(value))

    def test_wrong_arity(self):
        value = loose_value("<t><m/><t>x</t><t>y</t></t>")
        with pytest.raises(ShapeError, match="2 items"):
            decode_polynomial(value, collect_ids(value))

    def test_raw_text_polynomial(self):
        value = loose_value("<t>1 2</t>")
        with pytest.raises(ShapeError):
            decode_polynomial(value, collect_ids(value))

    def test_terms_not_a_matrix(self):
        value = loose_value("<t><v>1</v><t>x</t></t>")
        with pytest.raises(ShapeError, match="matrix"):
            decode_polynomial(value, collect_ids(value))

    def test_fractional_exponent(self):
        value = loose_value("<t><m><t><v>1/2</v><e>1</e></t></m><t>x</t></t>")
        with pytest.raises(ShapeError, match="nonnegative integers"):
            decode_polynomial(value, collect_ids(value))

    def test_exponent_length(self):
        value = loose_value("<t><m><t><v>1 2</v><e>1</e></t></m><t>x</t></t>")
        with pytest.raises(ShapeError, match="length 2"):
            decode_polynomial(value, collect_ids(value))

    def test_repeated_monomial(self):
        value = loose_value(
            "<t><m><t><v>1</v><e>1</e></t><t><v>1</v><e>2</e></t></m><t>x</t></t>"
        )
        with pytest.raises(ShapeError, match="occurs twice"):
            decode_polynomial(value, collect_ids(value))

    def test_bad_coefficient(self):
        value = loose_value("<t><m><t><v>1</v><e>one</e></t></m><t>x</t></t>")
        with pytest.raises(RationalParseError):
            decode_polynomial(value, collect_ids(value))

    def test_not_a_polynomial(self):
        with pytest.raises(ShapeError):
            decode_polynomials(ScalarText(text="1"))


class TestRenderPolynomial:
    """Tests for render_polynomial"""

    def test_fixture(self, polynomial_doc):
        (p,) = decode_polynomials(polynomial_doc.body.data)
        assert render_polynomial(p) == "1/5√5*x^2 + -1*y^3"

    def test_constant_and_linear_terms(self):
        p = Polynomial(
            terms=(term((0, 0), 7), term((1, 0), 2), term((1, 2), 1, 1, 2)),
            variables=("x", "y"),
        )
        assert render_polynomial(p) == "7 + 2*x + (1+1√2)*x*y^2"


class TestPolynomialModel:
    """Tests for the Polynomial invariants"""

    def test_exponent_length(self):
        with pytest.raises(ValidationError, match="variable"):
            Polynomial(terms=(term((1,), 1),), variables=("x", "y"))

    def test_negative_exponent(self):
        with pytest.raises(ValidationError, match="negative exponent"):
            Polynomial(terms=(term((-1,), 1),), variables=("x",))

    def test_duplicate_monomials(self):
        with pytest.raises(ValidationError, match="occurs twice"):
            Polynomial(terms=(term((1,), 1), term((1,), 2)), variables=("x",))
