"""Exact scalars: big rationals, polynomials in q over the rationals and the field Q(q).

Every QRational is kept as a reduced fraction with a monic denominator, so two
values are mathematically equal exactly when they are structurally equal.
"""

import operator
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import sympy
from sympy import QQ, Poly

from qforge.errors import DivisionByZero, EvaluationPole, InvalidArgument

BigRational = Fraction
Coefficient = int | Fraction

Q_SYMBOL = sympy.Symbol("q")


def _norm(value: Coefficient) -> Coefficient:
    # integers stay ints, Fraction arithmetic is only paid for when needed
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _as_coefficient(value) -> Coefficient:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _norm(value)
    if isinstance(value, float):
        raise InvalidArgument("floating-point coefficients are not exact; pass a Fraction")
    return _norm(Fraction(value))


def _render_terms(items: Iterable[tuple[int, Coefficient]], var: str = "q") -> str:
    parts: list[str] = []
    for deg, coeff in items:
        negative = coeff < 0
        mag = -coeff if negative else coeff
        if deg == 0:
            body = str(mag)
        else:
            power = var if deg == 1 else f"{var}^{deg}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts) or "0"


class QPolynomial:
    """Sparse polynomial in q with rational coefficients (degree -> coefficient)."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean: dict[int, Coefficient] = {}
        for deg, value in (coeffs or {}).items():
            if deg < 0:
                raise InvalidArgument(f"negative degree {deg} in QPolynomial")
            coeff = _as_coefficient(value)
            if coeff:
                clean[int(deg)] = coeff
        self._coeffs = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, coeffs: dict[int, Coefficient]) -> "QPolynomial":
        poly = cls.__new__(cls)
        poly._coeffs = coeffs
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, value) -> "QPolynomial":
        coeff = _as_coefficient(value)
        return cls._raw({0: coeff} if coeff else {})

    @classmethod
    def monomial(cls, degree: int, value=1) -> "QPolynomial":
        return cls({degree: value})

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def is_one(self) -> bool:
        return len(self._coeffs) == 1 and self._coeffs.get(0) == 1

    @property
    def is_constant(self) -> bool:
        return not self._coeffs or (len(self._coeffs) == 1 and 0 in self._coeffs)

    @property
    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    @property
    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else -1

    @property
    def low_degree(self) -> int:
        return min(self._coeffs) if self._coeffs else 0

    @property
    def leading_coefficient(self) -> Coefficient:
        return self._coeffs[self.degree] if self._coeffs else 0

    @property
    def trailing_coefficient(self) -> Coefficient:
        return self._coeffs[self.low_degree] if self._coeffs else 0

    def coefficient(self, degree: int) -> Coefficient:
        return self._coeffs.get(degree, 0)

    def items(self) -> tuple[tuple[int, Coefficient], ...]:
        return tuple(sorted(self._coeffs.items()))

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, QPolynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self == QPolynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"QPolynomial({self.render()!r})"

    def __neg__(self) -> "QPolynomial":
        return QPolynomial._raw({d: -c for d, c in self._coeffs.items()})

    def _combine(self, other: "QPolynomial", sign: int) -> "QPolynomial":
        result = dict(self._coeffs)
        for deg, coeff in other._coeffs.items():
            value = result.get(deg, 0) + sign * coeff
            if value:
                result[deg] = _norm(value)
            else:
                result.pop(deg, None)
        return QPolynomial._raw(result)

    def __add__(self, other) -> "QPolynomial":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "QPolynomial":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other) -> "QPolynomial":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __mul__(self, other) -> "QPolynomial":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return other
        if not self._coeffs or not other._coeffs:
            return ZERO_POLY
        if other.is_monomial:
            ((shift, factor),) = other._coeffs.items()
            return self.scale(factor).shift(shift)
        if self.is_monomial:
            return other * self
        result: dict[int, Coefficient] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                key = d1 + d2
                result[key] = result.get(key, 0) + c1 * c2
        return QPolynomial._raw({d: _norm(c) for d, c in result.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "QPolynomial":
        if exponent < 0:
            raise InvalidArgument("negative power of a polynomial; use QRational")
        result = ONE_POLY
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor) -> "QPolynomial":
        factor = _as_coefficient(factor)
        if not factor:
            return ZERO_POLY
        if factor == 1:
            return self
        return QPolynomial._raw({d: _norm(c * factor) for d, c in self._coeffs.items()})

    def shift(self, k: int) -> "QPolynomial":
        if k == 0:
            return self
        if k < 0 and self._coeffs and self.low_degree + k < 0:
            raise InvalidArgument(f"cannot divide by q^{-k}: q-adic order is {self.low_degree}")
        return QPolynomial._raw({d + k: c for d, c in self._coeffs.items()})

    def monic(self) -> "QPolynomial":
        if not self._coeffs:
            return self
        return self.scale(Fraction(1) / self.leading_coefficient)

    def __divmod__(self, other: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        remainder = dict(self._coeffs)
        quotient: dict[int, Coefficient] = {}
        top = other.degree
        lead = other.leading_coefficient
        while remainder:
            deg = max(remainder)
            if deg < top:
                break
            factor = _norm(Fraction(remainder[deg]) / lead)
            shift = deg - top
            quotient[shift] = factor
            for d, c in other._coeffs.items():
                key = d + shift
                value = remainder.get(key, 0) - factor * c
                if value:
                    remainder[key] = _norm(value)
                else:
                    remainder.pop(key, None)
        return QPolynomial._raw(quotient), QPolynomial._raw(remainder)

    def to_sympy(self) -> Poly:
        return Poly.from_dict(
            {(deg,): sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for deg, c in self._coeffs.items()},
            Q_SYMBOL,
            domain=QQ,
        )

    @classmethod
    def from_sympy(cls, poly: Poly) -> "QPolynomial":
        return cls._raw({deg: _norm(Fraction(int(c.p), int(c.q))) for (deg,), c in poly.terms() if c})

    def gcd(self, other: "QPolynomial") -> "QPolynomial":
        """Monic gcd over Q[q]."""
        if self.is_zero:
            return other.monic()
        if other.is_zero:
            return self.monic()
        return QPolynomial.from_sympy(self.to_sympy().gcd(other.to_sympy())).monic()

    def evaluate(self, q0) -> Fraction:
        q0 = Fraction(q0)
        total = Fraction(0)
        for deg, coeff in self._coeffs.items():
            total += coeff * q0**deg
        return total

    def render(self) -> str:
        return _render_terms(self.items())


def _coerce_poly(value):
    if isinstance(value, QPolynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return QPolynomial.constant(value)
    return NotImplemented


ZERO_POLY = QPolynomial._raw({})
ONE_POLY = QPolynomial._raw({0: 1})


def _canonical(num: QPolynomial, den: QPolynomial) -> tuple[QPolynomial, QPolynomial]:
    if den.is_zero:
        raise DivisionByZero("zero denominator in Q(q)")
    if num.is_zero:
        return ZERO_POLY, ONE_POLY
    if den.is_one:
        return num, den
    common = min(num.low_degree, den.low_degree)
    if common:
        num, den = num.shift(-common), den.shift(-common)
    if not den.is_monomial:
        f, h = num.to_sympy(), den.to_sympy()
        g = f.gcd(h)
        if g.degree() > 0:
            num, den = QPolynomial.from_sympy(f.exquo(g)), QPolynomial.from_sympy(h.exquo(g))
    lead = den.leading_coefficient
    if lead != 1:
        inverse = Fraction(1) / lead
        num, den = num.scale(inverse), den.scale(inverse)
    return num, den


class QRational:
    """Element of Q(q) as num/den, reduced, with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num_poly = _coerce_poly(num)
        den_poly = _coerce_poly(den)
        if num_poly is NotImplemented or den_poly is NotImplemented:
            raise InvalidArgument(f"cannot build a QRational from {num!r}/{den!r}")
        self.num, self.den = _canonical(num_poly, den_poly)
        self._hash: int | None = None

    @classmethod
    def _raw(cls, num: QPolynomial, den: QPolynomial) -> "QRational":
        value = cls.__new__(cls)
        value.num = num
        value.den = den
        value._hash = None
        return value

    @classmethod
    def coerce(cls, value) -> "QRational":
        if isinstance(value, QRational):
            return value
        if isinstance(value, (int, Fraction, QPolynomial)):
            return cls(value)
        raise InvalidArgument(f"not an element of Q(q): {value!r}")

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_one

    @property
    def is_laurent(self) -> bool:
        return self.den.is_monomial

    @property
    def is_laurent_monomial(self) -> bool:
        return self.den.is_monomial and len(self.num) <= 1

    def __eq__(self, other) -> bool:
        if isinstance(other, QRational):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, QPolynomial)):
            return self == QRational(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"QRational({self.render()!r})"

    def __str__(self) -> str:
        return self.render()

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __neg__(self) -> "QRational":
        return QRational._raw(-self.num, self.den)

    def __add__(self, other) -> "QRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.den == other.den:
            if self.den.is_one:
                return QRational._raw(self.num + other.num, ONE_POLY)
            return QRational(self.num + other.num, self.den)
        return QRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "QRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "QRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> "QRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return ZERO
        if self.den.is_one and other.den.is_one:
            return QRational._raw(self.num * other.num, ONE_POLY)
        return QRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QRational":
        if self.is_zero:
            raise DivisionByZero("inverse of zero in Q(q)")
        return QRational(self.den, self.num)

    def __truediv__(self, other) -> "QRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "QRational":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return QRational._raw(self.num**exponent, self.den**exponent)

    def q_shift(self, k: int) -> "QRational":
        """Multiply by q^k."""
        if k == 0 or self.is_zero:
            return self
        if k > 0:
            return QRational(self.num.shift(k), self.den)
        return QRational(self.num, self.den.shift(-k))

    def evaluate(self, q0) -> Fraction:
        q0 = Fraction(q0)
        den = self.den.evaluate(q0)
        if den == 0:
            raise EvaluationPole(f"{self.render()} has a pole at q = {q0}")
        return self.num.evaluate(q0) / den

    def sign_hint(self) -> int:
        num, _ = self._display_parts()
        return -1 if num.trailing_coefficient < 0 else 1

    def _display_parts(self) -> tuple[QPolynomial, QPolynomial]:
        # (1 - q) reads better than the monic (q - 1)
        if self.den.trailing_coefficient < 0:
            return -self.num, -self.den
        return self.num, self.den

    def render(self) -> str:
        if self.den.is_one:
            return self.num.render()
        if self.den.is_monomial:
            shift = self.den.degree
            return _render_terms((deg - shift, c) for deg, c in self.num.items())
        num, den = self._display_parts()
        num_text = num.render()
        if len(num) > 1:
            num_text = f"({num_text})"
        return f"{num_text}/({den.render()})"


def _coerce_rational(value):
    if isinstance(value, QRational):
        return value
    if isinstance(value, (int, Fraction, QPolynomial)):
        return QRational(value)
    return NotImplemented


ZERO = QRational._raw(ZERO_POLY, ONE_POLY)
ONE = QRational._raw(ONE_POLY, ONE_POLY)
Q = QRational._raw(QPolynomial._raw({1: 1}), ONE_POLY)

_FIELD_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def field_ops(lhs: QRational, rhs: QRational, op: str) -> QRational:
    try:
        fn = _FIELD_OPS[op]
    except KeyError:
        raise InvalidArgument(f"unknown field operation '{op}'") from None
    return fn(QRational.coerce(lhs), QRational.coerce(rhs))


def q_power(exponent: int) -> QRational:
    if exponent >= 0:
        return QRational._raw(QPolynomial._raw({exponent: 1}), ONE_POLY)
    return QRational._raw(ONE_POLY, QPolynomial._raw({-exponent: 1}))


def qrat_eval(r: QRational, q0) -> Fraction:
    return QRational.coerce(r).evaluate(q0)


@lru_cache(maxsize=None)
def q_factorial(n: int) -> QRational:
    """(q;q)_n as an element of Q(q)."""
    if n < 0:
        raise InvalidArgument(f"(q;q)_n needs n >= 0, got {n}")
    if n == 0:
        return ONE
    previous = q_factorial(n - 1)
    return QRational._raw(previous.num * QPolynomial._raw({0: 1, n: -1}), ONE_POLY)
