"""
Exact scalars in the tower Q, Q(i), Q(lambda), Q(i)(lambda)
"""

from enum import Enum
from typing import Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, field

from ddbar.core.exceptions import ScalarDivisionError

# lambda is a formal transcendental over Q
QLAMBDA, LAMBDA = field("lambda", QQ)


class FieldTag(str, Enum):
    """Coefficient fields, ordered by inclusion"""

    Q = "Q"
    QI = "Qi"
    QLAMBDA = "Qlambda"
    QILAMBDA = "Qilambda"

    @property
    def has_i(self) -> bool:
        return self in (FieldTag.QI, FieldTag.QILAMBDA)

    @property
    def has_lambda(self) -> bool:
        return self in (FieldTag.QLAMBDA, FieldTag.QILAMBDA)

    @classmethod
    def of(cls, has_i: bool, has_lambda: bool) -> "FieldTag":
        if has_i:
            return cls.QILAMBDA if has_lambda else cls.QI
        return cls.QLAMBDA if has_lambda else cls.Q

    def join(self, other: "FieldTag") -> "FieldTag":
        return FieldTag.of(self.has_i or other.has_i, self.has_lambda or other.has_lambda)

    def contains(self, other: "FieldTag") -> bool:
        return (self.has_i or not other.has_i) and (self.has_lambda or not other.has_lambda)


def _is_frac(c) -> bool:
    return isinstance(c, FracElement)


def _lift(c) -> FracElement:
    return c if _is_frac(c) else QLAMBDA.ground_new(c)


def _lower(c):
    """Return a plain rational when a rational function is constant"""
    if _is_frac(c) and c.numer.is_ground and c.denom.is_ground:
        if not c.numer:
            return QQ.zero
        return QQ.quo(c.numer.LC, c.denom.LC)
    return c


def _coerce(value) -> object:
    if _is_frac(value):
        return _lower(value)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def _add(a, b):
    if _is_frac(a) or _is_frac(b):
        return _lower(_lift(a) + _lift(b))
    return a + b


def _sub(a, b):
    if _is_frac(a) or _is_frac(b):
        return _lower(_lift(a) - _lift(b))
    return a - b


def _mul(a, b):
    if not a or not b:
        return QQ.zero
    if _is_frac(a) or _is_frac(b):
        return _lower(_lift(a) * _lift(b))
    return a * b


def _div(a, b):
    if _is_frac(a) or _is_frac(b):
        return _lower(_lift(a) / _lift(b))
    return QQ.quo(a, b)


def _rational_text(c) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _poly_text(poly) -> str:
    parts = []
    for (k,), coeff in poly.terms():
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        if k == 0:
            body = _rational_text(magnitude)
        else:
            power = "lambda" if k == 1 else f"lambda^{k}"
            body = power if magnitude == 1 else f"{_rational_text(magnitude)}*{power}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts) if parts else "0"


def _component_text(c) -> str:
    if not _is_frac(c):
        return _rational_text(c)
    lc = c.denom.LC
    numer = c.numer.quo_ground(lc)
    denom = c.denom.quo_ground(lc)
    if denom.is_ground:
        return _poly_text(numer)
    return f"({_poly_text(numer)})/({_poly_text(denom)})"


class Scalar:
    """Immutable value re + im*i with re, im in Q(lambda)"""

    __slots__ = ("re", "im", "tag", "_text")

    def __init__(self, re=0, im=0, tag: Optional[FieldTag] = None):
        self.re = _coerce(re)
        self.im = _coerce(im)
        self._text: Optional[str] = None
        if tag is None:
            tag = FieldTag.of(bool(self.im), _is_frac(self.re) or _is_frac(self.im))
        self.tag = tag

    # Constructors

    @classmethod
    def zero(cls) -> "Scalar":
        return cls(0)

    @classmethod
    def one(cls) -> "Scalar":
        return cls(1)

    @classmethod
    def i(cls) -> "Scalar":
        return cls(0, 1, FieldTag.QI)

    @classmethod
    def lam(cls) -> "Scalar":
        return cls(LAMBDA, 0, FieldTag.QLAMBDA)

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "Scalar":
        if q == 0:
            raise ScalarDivisionError()
        return cls(QQ(p, q))

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, int):
            return cls(value)
        raise TypeError(f"cannot interpret {value!r} as a scalar")

    # Arithmetic

    def _join(self, other: "Scalar") -> FieldTag:
        return self.tag.join(other.tag)

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        other = Scalar.coerce(other)
        return Scalar(_add(self.re, other.re), _add(self.im, other.im), self._join(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        other = Scalar.coerce(other)
        return Scalar(_sub(self.re, other.re), _sub(self.im, other.im), self._join(other))

    def __rsub__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        return Scalar.coerce(other) - self

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im, self.tag)

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        other = Scalar.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar(_mul(a, c), 0, self._join(other))
        re = _sub(_mul(a, c), _mul(b, d))
        im = _add(_mul(a, d), _mul(b, c))
        return Scalar(re, im, self._join(other))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise ScalarDivisionError()
        a, b = self.re, self.im
        if not b:
            return Scalar(_div(QQ.one, a), 0, self.tag)
        norm = _add(_mul(a, a), _mul(b, b))
        return Scalar(_div(a, norm), _div(-b, norm), self.tag)

    def __truediv__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        other = Scalar.coerce(other)
        return (self * other.inverse()).retag(self._join(other))

    def __rtruediv__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        return Scalar.coerce(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = Scalar(1, 0, self.tag)
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im, self.tag)

    def retag(self, tag: FieldTag) -> "Scalar":
        return Scalar(self.re, self.im, tag)

    # Predicates

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return not (self - other)

    def __hash__(self) -> int:
        return hash(self.to_text())

    @property
    def is_real(self) -> bool:
        """True when fixed by conjugation"""
        return not self.im

    @property
    def is_rational(self) -> bool:
        return not self.im and not _is_frac(self.re)

    def minimal_tag(self) -> FieldTag:
        return FieldTag.of(bool(self.im), _is_frac(self.re) or _is_frac(self.im))

    def is_in_subfield(self, tag: FieldTag) -> Tuple[bool, Optional["Scalar"]]:
        """Membership test with the down-cast witness"""
        if tag.contains(self.minimal_tag()):
            return True, self.retag(tag)
        return False, None

    def as_fraction(self):
        """The rational-function value of a real scalar"""
        if self.im:
            raise ValueError(f"{self} is not real")
        return _lift(self.re)

    # Text

    def to_text(self) -> str:
        if self._text is None:
            self._text = self._render()
        return self._text

    def _render(self) -> str:
        re, im = self.re, self.im
        if not im:
            return _component_text(re)
        if _is_frac(im):
            imag = f"({_component_text(im)})*i"
            negative = False
        else:
            negative = im < 0
            magnitude = -im if negative else im
            imag = "i" if magnitude == 1 else f"{_rational_text(magnitude)}*i"
        if not re:
            return f"-{imag}" if negative else imag
        sign = " - " if negative else " + "
        return f"{_component_text(re)}{sign}{imag}"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r}, tag={self.tag.value})"


ZERO = Scalar.zero()
ONE = Scalar.one()
I = Scalar.i()
HALF = Scalar.rational(1, 2)


def parse_scalar(text: str) -> Scalar:
    """Parse the scalar grammar"""
    from ddbar.models.expressions import evaluate_scalar

    return evaluate_scalar(text)
