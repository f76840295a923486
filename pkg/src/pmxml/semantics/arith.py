"""
Exact scalar arithmetic

Rationals are parsed from file tokens into Fractions only here; the format
layers never interpret tokens. QuadExt is a number a + b*sqrt(c) with
rational a, b, c kept in the normal form b = 0 <=> c = 0.
"""

import logging
import re
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Any, Literal

import mpmath
from pydantic import BaseModel, ConfigDict, model_validator

from pmxml.core.errors import (
    ArityError,
    NegativeRadicandError,
    RationalParseError,
    ShapeError,
    ZeroDenominatorError,
)
from pmxml.core.models import ElementE, RawText, TupleV, Value, split_tokens

logger = logging.getLogger(__name__)

Rational = Fraction

_RATIONAL = re.compile(r"([+-]?[0-9]+)(?:/([0-9]+))?")

# digits carried by mpmath before rounding to the display precision
WORKING_DIGITS = 50


def parse_rational(token: str) -> Rational:
    """
    Parse `[+-]digits[/digits]` into a normalized Fraction

    Raises:
        RationalParseError: Token is not of that form
        ZeroDenominatorError: Denominator is zero
    """
    match = _RATIONAL.fullmatch(token)
    if match is None:
        raise RationalParseError(token)
    numerator, denominator = match.groups()
    if denominator is None:
        return Fraction(int(numerator))
    if int(denominator) == 0:
        raise ZeroDenominatorError(token)
    return Fraction(int(numerator), int(denominator))


def _as_rational(value: Any) -> Rational:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def _sign(x: Rational) -> int:
    return (x > 0) - (x < 0)


class QuadExt(BaseModel):
    """a + b*sqrt(c); c is not reduced to a squarefree radicand"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Rational
    b: Rational = Fraction(0)
    c: Rational = Fraction(0)

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        a = _as_rational(data.get("a", 0))
        b = _as_rational(data.get("b", 0))
        c = _as_rational(data.get("c", 0))
        if c < 0:
            raise NegativeRadicandError(c)
        if b == 0 or c == 0:
            b, c = Fraction(0), Fraction(0)
        return {"a": a, "b": b, "c": c}

    @classmethod
    def rational(cls, a: Any) -> "QuadExt":
        return cls(a=a)

    @property
    def is_rational(self) -> bool:
        return self.c == 0

    def __str__(self) -> str:
        return format_quad(self)


def format_quad(q: QuadExt) -> str:
    """`a` for rationals, `b√c` when a is 0, `(a+b√c)` or `(a-b√c)` otherwise"""
    if q.is_rational:
        return str(q.a)
    radical = f"{abs(q.b)}√{q.c}"
    if q.a == 0:
        return f"-{radical}" if q.b < 0 else radical
    operator = "-" if q.b < 0 else "+"
    return f"({q.a}{operator}{radical})"


def _tuple_tokens(t: TupleV) -> list[str]:
    if isinstance(t.items, RawText):
        return split_tokens(t.items.text)
    tokens = []
    for item in t.items.items:
        if not isinstance(item, ElementE):
            raise ShapeError("quadratic extension entries must be scalars", type(item).__name__)
        tokens.append(item.text.strip())
    return tokens


def quad_from_tuple(t: TupleV) -> QuadExt:
    """
    Read a tuple `a b c` as a + b*sqrt(c)

    Raises:
        ArityError: Not exactly three entries
        RationalParseError: An entry is not a rational
        NegativeRadicandError: c < 0
    """
    tokens = _tuple_tokens(t)
    if len(tokens) != 3:
        raise ArityError(3, len(tokens))
    a, b, c = (parse_rational(token) for token in tokens)
    return QuadExt(a=a, b=b, c=c)


def quad_from_value(v: Value) -> QuadExt:
    """A coefficient given either as an (a, b, c) tuple or as a plain rational"""
    if isinstance(v, TupleV):
        return quad_from_tuple(v)
    if isinstance(v, ElementE):
        return QuadExt.rational(parse_rational(v.text.strip()))
    raise ShapeError("expected a coefficient", type(v).__name__)


def quad_sign(q: QuadExt) -> Literal[-1, 0, 1]:
    """Exact sign of a + b*sqrt(c), using rational arithmetic only"""
    sign_a, sign_b = _sign(q.a), _sign(q.b)
    if sign_b == 0:
        return sign_a  # type: ignore[return-value]
    if sign_a == 0 or sign_a == sign_b:
        return sign_b  # type: ignore[return-value]
    # opposite signs: the larger magnitude wins
    lhs, rhs = q.a * q.a, q.b * q.b * q.c
    if lhs == rhs:
        return 0
    return (sign_a if lhs > rhs else sign_b)  # type: ignore[return-value]


def _decimal_of(x: Rational) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _round_significant(value: Decimal, digits: int) -> Decimal:
    exponent = value.adjusted() - (digits - 1)
    rounded = value.quantize(Decimal(1).scaleb(exponent), rounding=ROUND_HALF_EVEN)
    if rounded.adjusted() != value.adjusted():
        # rounding carried into a new leading digit
        rounded = rounded.quantize(Decimal(1).scaleb(exponent + 1), rounding=ROUND_HALF_EVEN)
    return rounded


def quad_approx(q: QuadExt, digits: int = 12) -> str:
    """
    Decimal string of a + b*sqrt(c) rounded to `digits` significant digits

    Rational values are divided in Decimal; radicals are evaluated by mpmath
    at 50 digits. Rounding is half-even; exact zero prints as 0 with
    digits - 1 decimals.
    """
    if digits < 1:
        raise ValueError(f"digits must be positive, got {digits}")
    if quad_sign(q) == 0:
        return format(Decimal(0).scaleb(-(digits - 1)), "f")
    with localcontext() as ctx:
        ctx.prec = WORKING_DIGITS + digits
        if q.is_rational:
            value = _decimal_of(q.a)
        else:
            with mpmath.workdps(WORKING_DIGITS):
                root = mpmath.sqrt(mpmath.mpf(q.c.numerator) / q.c.denominator)
                approx = mpmath.mpf(q.a.numerator) / q.a.denominator + (
                    mpmath.mpf(q.b.numerator) / q.b.denominator
                ) * root
                value = Decimal(mpmath.nstr(approx, WORKING_DIGITS, strip_zeros=False))
        return format(_round_significant(value, digits), "f")

