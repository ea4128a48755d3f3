import logging
import math
from functools import lru_cache

from qforge.algebra.multipoly import ONE_POLY, ZERO, MultiPoly, as_poly, poly_sum
from qforge.algebra.qseries import TruncSeries, euler_inv_series, pochhammer_product_series
from qforge.algebra.rational import ONE, QPolynomial, QRational, q_factorial, q_power
from qforge.errors import DenominatorDegeneracy, InvalidArgument

logger = logging.getLogger(__name__)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def qpochhammer(a, n: int) -> MultiPoly:
    """(a;q)_n = (1 - a)(1 - aq)...(1 - aq^(n-1))."""
    if n < 0:
        raise InvalidArgument(f"(a;q)_n needs n >= 0, got {n}")
    a = as_poly(a)
    result = ONE_POLY
    for k in range(n):
        result = result * (ONE_POLY - a.q_shift(k))
    return result


@lru_cache(maxsize=None)
def _gaussian_row(n: int) -> tuple[QPolynomial, ...]:
    if n == 0:
        return (QPolynomial.constant(1),)
    prev = _gaussian_row(n - 1)
    row = [prev[0]]
    for k in range(1, n):
        # q-Pascal: [n,k] = [n-1,k-1] + q^k [n-1,k]
        row.append(prev[k - 1] + prev[k].shift(k))
    row.append(prev[n - 1])
    return tuple(row)


def qbinom(n: int, k: int) -> QRational:
    if n < 0 or k < 0 or k > n:
        raise InvalidArgument(f"q-binomial [{n}, {k}] needs 0 <= k <= n")
    return QRational(_gaussian_row(n)[k])


def q_multinomial(m: int, parts: tuple[int, ...]) -> QRational:
    result = ONE
    rest = m
    for part in parts[:-1]:
        result = result * qbinom(rest, part)
        rest -= part
    return result


def cauchy_P(n: int, x, y) -> MultiPoly:
    """P_n(x, y) = (x - y)(x - qy)...(x - q^(n-1) y)."""
    return _cauchy_P(n, as_poly(x), as_poly(y))


@lru_cache(maxsize=4096)
def _cauchy_P(n: int, x: MultiPoly, y: MultiPoly) -> MultiPoly:
    if n < 0:
        raise InvalidArgument(f"P_n needs n >= 0, got {n}")
    if n == 0:
        return ONE_POLY
    return _cauchy_P(n - 1, x, y) * (x - y.q_shift(n - 1))


def jhc_terms(n: int, x, y) -> list[MultiPoly]:
    """Summands [n,k] q^C(k,2) x^(n-k) y^k of the q-addition power (x (+) y)^n."""
    if n < 0:
        raise InvalidArgument(f"(x (+) y)^n needs n >= 0, got {n}")
    x, y = as_poly(x), as_poly(y)
    return [(x ** (n - k) * y**k).scale(qbinom(n, k) * q_power(math.comb(k, 2))) for k in range(n + 1)]


def q_add_pow(n: int, x, y) -> MultiPoly:
    return poly_sum(jhc_terms(n, x, y))


def eq_series(c, order: int) -> TruncSeries:
    """e_q(c t) = 1/(c t; q)_oo."""
    return euler_inv_series(c, order)


def Eq_series(c, order: int) -> TruncSeries:
    """E_q(c t) = (-c t; q)_oo."""
    return pochhammer_product_series(-as_poly(c), order)


def phi_series(upper: list, lower: list, z, order: int) -> TruncSeries:
    """Truncated r-phi-s series; coefficient n carries [(-1)^n q^C(n,2)]^(1+s-r)."""
    upper = [as_poly(a) for a in upper]
    lower = [as_poly(b) for b in lower]
    z = as_poly(z)
    if len(z) > 1:
        raise InvalidArgument(f"phi argument must be a single term, got {z.render()}")
    for b in lower:
        if not b.is_constant:
            raise InvalidArgument(f"lower parameter {b.render()} must be a scalar")
    lower_values = [b.constant_value() for b in lower]
    power = 1 + len(lower) - len(upper)

    out = []
    num = ONE_POLY
    den = ONE
    z_power = ONE_POLY
    for n in range(order + 1):
        if n:
            num = num * _upper_step(upper, n - 1)
            for b in lower_values:
                den = den * (ONE - b.q_shift(n - 1))
            z_power = z_power * z
        if den.is_zero:
            raise DenominatorDegeneracy(f"lower parameter product vanishes at n = {n}")
        correction = q_power(power * math.comb(n, 2)) * _sign(n * power)
        out.append((num * z_power).scale(correction / (den * q_factorial(n))))
    return TruncSeries(out, order)


def _upper_step(params: list[MultiPoly], k: int) -> MultiPoly:
    # prod_i (1 - a_i q^k), the step factor of the upper q-shifted factorials
    result = ONE_POLY
    for a in params:
        result = result * (ONE_POLY - a.q_shift(k))
    return result


def ratio_coeff(m: int, alpha, beta, gamma, delta) -> MultiPoly:
    """(q;q)_m times the s^m coefficient of (alpha s)(beta s) / ((gamma s)(delta s)), infinite products."""
    return _ratio_coeff(m, as_poly(alpha), as_poly(beta), as_poly(gamma), as_poly(delta))


@lru_cache(maxsize=2048)
def _ratio_coeff(m: int, alpha: MultiPoly, beta: MultiPoly, gamma: MultiPoly, delta: MultiPoly) -> MultiPoly:
    if m < 0:
        raise InvalidArgument(f"kernel order must be >= 0, got {m}")
    powers = [[ONE_POLY] for _ in range(4)]
    for slot, base in enumerate((alpha, beta, gamma, delta)):
        for _ in range(m):
            powers[slot].append(powers[slot][-1] * base)

    total = ZERO
    for a in range(m + 1):
        for b in range(m - a + 1):
            for c in range(m - a - b + 1):
                d = m - a - b - c
                scalar = q_multinomial(m, (a, b, c, d)) * q_power(math.comb(a, 2) + math.comb(b, 2)) * _sign(a + b)
                term = powers[0][a] * powers[1][b] * powers[2][c] * powers[3][d]
                total = total + term.scale(scalar)
    logger.debug("Kernel of order %s has %s terms", m, len(total))
    return total
