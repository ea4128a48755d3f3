import logging
from fractions import Fraction
from operator import add
from typing import Iterable, Mapping

from qforge.algebra.rational import ONE, QPolynomial, QRational
from qforge.errors import EvaluationPole, InvalidArgument, InvalidSubstitution, UnboundVariable

logger = logging.getLogger(__name__)

VARIABLES: tuple[str, ...] = (
    "x", "y", "z", "xi", "zeta", "X", "Y", "Z", "Omega", "U", "a",
    *(f"c{i}" for i in range(10)),
)
VARIABLE_INDEX = {name: i for i, name in enumerate(VARIABLES)}
NVARS = len(VARIABLES)

Monomial = tuple[int, ...]
UNIT_MONOMIAL: Monomial = (0,) * NVARS


def monomial_key(exps: Monomial) -> tuple[int, Monomial]:
    # graded lex: total degree first, then exponents in alphabet order (x > y > z ...)
    return sum(exps), exps


def render_monomial(exps: Monomial) -> str:
    parts = []
    for name, e in zip(VARIABLES, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class MultiPoly:
    """Sparse polynomial in the fixed variable alphabet with coefficients in Q(q)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, QRational] = {}
        for exps, value in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != NVARS or any(e < 0 for e in exps):
                raise InvalidArgument(f"bad exponent vector {exps}")
            coeff = QRational.coerce(value)
            if coeff:
                clean[exps] = coeff
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, QRational]) -> "MultiPoly":
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        try:
            index = VARIABLE_INDEX[name]
        except KeyError:
            raise UnboundVariable(name) from None
        exps = [0] * NVARS
        exps[index] = 1
        return cls._raw({tuple(exps): ONE})

    @classmethod
    def const(cls, value) -> "MultiPoly":
        coeff = QRational.coerce(value)
        return cls._raw({UNIT_MONOMIAL: coeff} if coeff else {})

    @classmethod
    def coerce(cls, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, str):
            return cls.var(value)
        return cls.const(value)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT_MONOMIAL in self._terms)

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) <= 1

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def constant_value(self) -> QRational:
        if not self.is_constant:
            raise InvalidArgument(f"{self.render()} is not a scalar")
        return self._terms.get(UNIT_MONOMIAL, QRational())

    def coefficient(self, exps: Monomial) -> QRational:
        return self._terms.get(tuple(exps), QRational())

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def terms(self) -> list[tuple[Monomial, QRational]]:
        return sorted(self._terms.items(), key=lambda item: monomial_key(item[0]), reverse=True)

    def variables(self) -> tuple[str, ...]:
        used = [False] * NVARS
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(name for name, flag in zip(VARIABLES, used) if flag)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, QPolynomial, QRational)):
            return self == MultiPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"

    def __str__(self) -> str:
        return self.render()

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def _combine(self, other: "MultiPoly", sign: int) -> "MultiPoly":
        result = dict(self._terms)
        for exps, coeff in other._terms.items():
            if sign < 0:
                coeff = -coeff
            prev = result.get(exps)
            value = coeff if prev is None else prev + coeff
            if value:
                result[exps] = value
            else:
                result.pop(exps, None)
        return MultiPoly._raw(result)

    def __add__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __mul__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ZERO
        if other.is_constant:
            return self.scale(other.constant_value())
        if self.is_constant:
            return other.scale(self.constant_value())
        acc: dict[Monomial, QRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(map(add, e1, e2))
                prod = c1 * c2
                prev = acc.get(key)
                acc[key] = prod if prev is None else prev + prod
        return MultiPoly._raw({e: c for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            other = other.constant_value()
        return self.scale(QRational.coerce(other).inverse())

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            if not self.is_constant:
                raise InvalidArgument(f"negative power of non-scalar {self.render()}")
            return MultiPoly.const(self.constant_value() ** exponent)
        result = ONE_POLY
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor) -> "MultiPoly":
        factor = QRational.coerce(factor)
        if factor.is_zero:
            return ZERO
        if factor.is_one:
            return self
        return MultiPoly._raw({e: c * factor for e, c in self._terms.items()})

    def q_shift(self, k: int) -> "MultiPoly":
        """Multiply every coefficient by q^k."""
        if k == 0:
            return self
        return MultiPoly._raw({e: c.q_shift(k) for e, c in self._terms.items()})

    def scale_substitute(self, subs: Mapping[str, object]) -> "MultiPoly":
        """Substitute v -> lambda_v * v; targets must be a nonzero scalar times the same variable."""
        factors: dict[int, QRational] = {}
        for name, target in subs.items():
            if name not in VARIABLE_INDEX:
                raise InvalidSubstitution(f"unknown variable '{name}'")
            index = VARIABLE_INDEX[name]
            if isinstance(target, MultiPoly):
                if len(target) != 1:
                    raise InvalidSubstitution(f"{name} -> {target.render()} is not a scaled variable")
                ((exps, coeff),) = target._terms.items()
                expected = [0] * NVARS
                expected[index] = 1
                if exps != tuple(expected):
                    raise InvalidSubstitution(f"{name} -> {target.render()} changes the variable")
                factor = coeff
            else:
                factor = QRational.coerce(target)
            if factor.is_zero:
                raise InvalidSubstitution(f"{name} -> 0 is not a scaled variable")
            factors[index] = factor
        if not factors:
            return self
        result: dict[Monomial, QRational] = {}
        for exps, coeff in self._terms.items():
            value = coeff
            for index, factor in factors.items():
                if exps[index]:
                    value = value * factor ** exps[index]
            result[exps] = value
        return MultiPoly._raw(result)

    def evaluate(self, point: Mapping[str, object], q0) -> Fraction:
        values: dict[int, Fraction] = {}
        for name in self.variables():
            if name not in point:
                raise UnboundVariable(name)
            values[VARIABLE_INDEX[name]] = Fraction(point[name])
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff.evaluate(q0)
            for index, e in enumerate(exps):
                if e:
                    term *= values[index] ** e
            total += term
        return total

    def render(self) -> str:
        if not self._terms:
            return "0"
        text = ""
        for exps, coeff in self.terms():
            negative = coeff.sign_hint() < 0
            if negative:
                coeff = -coeff
            mono = render_monomial(exps)
            if coeff.is_one:
                body = mono or "1"
            else:
                coeff_text = coeff.render()
                if not coeff.is_laurent_monomial:
                    coeff_text = f"({coeff_text})"
                body = f"{coeff_text}*{mono}" if mono else coeff_text
            if not text:
                text = f"-{body}" if negative else body
            else:
                text += f" - {body}" if negative else f" + {body}"
        return text


def _coerce(value):
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, (int, Fraction, QPolynomial, QRational)):
        return MultiPoly.const(value)
    return NotImplemented


ZERO = MultiPoly._raw({})
ONE_POLY = MultiPoly._raw({UNIT_MONOMIAL: ONE})


def as_poly(value) -> MultiPoly:
    """Variable name, scalar or MultiPoly -> MultiPoly."""
    return MultiPoly.coerce(value)


def poly_sum(items: Iterable[MultiPoly]) -> MultiPoly:
    total = ZERO
    for item in items:
        total = total + item
    return total


def mp_ops(lhs: MultiPoly, rhs: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise InvalidArgument(f"unknown polynomial operation '{op}'")


def mp_scale_substitute(p: MultiPoly, subs: Mapping[str, object]) -> MultiPoly:
    return p.scale_substitute(subs)


def mp_eval(p: MultiPoly, point: Mapping[str, object], q0) -> Fraction:
    try:
        return p.evaluate(point, q0)
    except EvaluationPole:
        logger.debug("Pole while evaluating %s at q=%s", p.render(), q0)
        raise
