"""Truncated power series in t (and bivariate in u, t) with MultiPoly coefficients."""

import math
import operator
from typing import Sequence

from qforge.algebra.multipoly import ONE_POLY, ZERO, MultiPoly
from qforge.algebra.rational import q_factorial, q_power
from qforge.errors import InsufficientTerms, InvalidArgument, NonUnitConstantTerm, OrderExceeded


class TruncSeries:
    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence[object], order: int | None = None):
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise InvalidArgument(f"series order must be >= 0, got {order}")
        values = [MultiPoly.coerce(c) for c in coeffs[: order + 1]]
        values.extend([ZERO] * (order + 1 - len(values)))
        self.order = order
        self.coeffs: tuple[MultiPoly, ...] = tuple(values)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([ONE_POLY], order)

    def coefficient(self, k: int) -> MultiPoly:
        if k < 0 or k > self.order:
            raise OrderExceeded(f"coefficient t^{k} is beyond order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise OrderExceeded(f"cannot raise order {self.order} to {order}")
        return TruncSeries(self.coeffs, order)

    def partial_sum(self) -> MultiPoly:
        total = ZERO
        for c in self.coeffs:
            total = total + c
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"TruncSeries(order={self.order}, coeffs={[c.render() for c in self.coeffs]})"

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        n = min(self.order, other.order)
        return TruncSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        n = min(self.order, other.order)
        return TruncSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)], n)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            factor = MultiPoly.coerce(other)
            return TruncSeries([c * factor for c in self.coeffs], self.order)
        return series_mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        return series_inverse(self)


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    n = min(a.order, b.order)
    out = []
    for k in range(n + 1):
        total = ZERO
        for i in range(k + 1):
            left, right = a.coeffs[i], b.coeffs[k - i]
            if left.is_zero or right.is_zero:
                continue
            total = total + left * right
        out.append(total)
    return TruncSeries(out, n)


def series_inverse(a: TruncSeries) -> TruncSeries:
    head = a.coeffs[0]
    if head.is_zero or not head.is_constant:
        raise NonUnitConstantTerm(f"constant term {head.render()} is not a nonzero scalar")
    inv0 = head.constant_value().inverse()
    out = [MultiPoly.const(inv0)]
    for k in range(1, a.order + 1):
        total = ZERO
        for i in range(1, k + 1):
            if not a.coeffs[i].is_zero:
                total = total + a.coeffs[i] * out[k - i]
        out.append(-total.scale(inv0))
    return TruncSeries(out, a.order)


def _single_term(c) -> MultiPoly:
    c = MultiPoly.coerce(c)
    if len(c) > 1:
        raise InvalidArgument(f"series argument must be a single term, got {c.render()}")
    return c


def pochhammer_product_series(c, order: int) -> TruncSeries:
    """(c t; q)_oo truncated at t^order."""
    c = _single_term(c)
    out = []
    power = ONE_POLY
    for k in range(order + 1):
        sign = -1 if k % 2 else 1
        out.append(power.scale(q_power(math.comb(k, 2)) * sign / q_factorial(k)))
        power = power * c
    return TruncSeries(out, order)


def euler_inv_series(c, order: int) -> TruncSeries:
    """1/(c t; q)_oo truncated at t^order."""
    c = _single_term(c)
    out = []
    power = ONE_POLY
    for k in range(order + 1):
        out.append(power.scale(q_factorial(k).inverse()))
        power = power * c
    return TruncSeries(out, order)


class BiTruncSeries:
    """Series in u and t, entry (i, j) is the coefficient of u^i t^j."""

    __slots__ = ("orders", "coeffs")

    def __init__(self, coeffs: Sequence[Sequence[object]], orders: tuple[int, int]):
        m, n = orders
        if m < 0 or n < 0:
            raise InvalidArgument(f"series orders must be >= 0, got {orders}")
        rows = []
        for i in range(m + 1):
            row = list(coeffs[i]) if i < len(coeffs) else []
            values = [MultiPoly.coerce(c) for c in row[: n + 1]]
            values.extend([ZERO] * (n + 1 - len(values)))
            rows.append(tuple(values))
        self.orders = (m, n)
        self.coeffs: tuple[tuple[MultiPoly, ...], ...] = tuple(rows)

    @classmethod
    def zeros(cls, m: int, n: int) -> "BiTruncSeries":
        return cls([], (m, n))

    def coefficient(self, i: int, j: int) -> MultiPoly:
        m, n = self.orders
        if not (0 <= i <= m and 0 <= j <= n):
            raise OrderExceeded(f"coefficient u^{i}*t^{j} is beyond orders {self.orders}")
        return self.coeffs[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiTruncSeries):
            return NotImplemented
        return self.orders == other.orders and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.orders, self.coeffs))

    def __repr__(self) -> str:
        return f"BiTruncSeries(orders={self.orders})"

    def _zip(self, other: "BiTruncSeries", sign: int) -> "BiTruncSeries":
        m = min(self.orders[0], other.orders[0])
        n = min(self.orders[1], other.orders[1])
        op = operator.add if sign > 0 else operator.sub
        rows = [[op(self.coeffs[i][j], other.coeffs[i][j]) for j in range(n + 1)] for i in range(m + 1)]
        return BiTruncSeries(rows, (m, n))

    def __add__(self, other: "BiTruncSeries") -> "BiTruncSeries":
        return self._zip(other, 1)

    def __sub__(self, other: "BiTruncSeries") -> "BiTruncSeries":
        return self._zip(other, -1)

    def __mul__(self, other: "BiTruncSeries") -> "BiTruncSeries":
        m = min(self.orders[0], other.orders[0])
        n = min(self.orders[1], other.orders[1])
        rows = []
        for i in range(m + 1):
            row = []
            for j in range(n + 1):
                total = ZERO
                for a in range(i + 1):
                    for b in range(j + 1):
                        left, right = self.coeffs[a][b], other.coeffs[i - a][j - b]
                        if left.is_zero or right.is_zero:
                            continue
                        total = total + left * right
                row.append(total)
            rows.append(row)
        return BiTruncSeries(rows, (m, n))


def jhc_substitute(seq: Sequence[object], m: int, n: int) -> BiTruncSeries:
    """Expand sum_j seq[j] (u (+) t)^j / (q;q)_j up to u^m t^n.

    Entry (j, s) is seq[j+s] q^C(s,2) / ((q;q)_j (q;q)_s).
    """
    if len(seq) < m + n + 1:
        raise InsufficientTerms(f"need {m + n + 1} sequence terms, got {len(seq)}")
    values = [MultiPoly.coerce(v) for v in seq[: m + n + 1]]
    rows = []
    for j in range(m + 1):
        row = []
        for s in range(n + 1):
            scalar = q_power(math.comb(s, 2)) / (q_factorial(j) * q_factorial(s))
            row.append(values[j + s].scale(scalar))
        rows.append(row)
    return BiTruncSeries(rows, (m, n))
