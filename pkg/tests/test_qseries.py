import pytest

from qforge.algebra.multipoly import MultiPoly
from qforge.algebra.qseries import (
    BiTruncSeries,
    TruncSeries,
    euler_inv_series,
    jhc_substitute,
    pochhammer_product_series,
    series_inverse,
    series_mul,
)
from qforge.algebra.rational import QPolynomial, QRational, q_factorial, q_power
from qforge.errors import InsufficientTerms, InvalidArgument, NonUnitConstantTerm, OrderExceeded


def test_product_times_inverse_is_one(xyz):
    x, _, _ = xyz
    for order in (0, 1, 6):
        product = series_mul(pochhammer_product_series(x, order), euler_inv_series(x, order))
        assert product == TruncSeries.one(order)


def test_inverse_matches_euler_series(xyz):
    x, _, _ = xyz
    assert series_inverse(pochhammer_product_series(x, 8)) == euler_inv_series(x, 8)
    assert pochhammer_product_series(x, 8).inverse().inverse() == pochhammer_product_series(x, 8)


def test_first_coefficients(xyz):
    x, _, _ = xyz
    series = pochhammer_product_series(x, 2)
    assert series.coefficient(0) == MultiPoly.const(1)
    assert series.coefficient(1) == -x.scale(q_factorial(1).inverse())
    assert euler_inv_series(0, 5) == TruncSeries.one(5)


def test_non_unit_constant_term(xyz):
    x, _, _ = xyz
    with pytest.raises(NonUnitConstantTerm):
        TruncSeries([x, 1], 1).inverse()
    with pytest.raises(NonUnitConstantTerm):
        TruncSeries([0, 1], 1).inverse()


def test_multi_term_argument_rejected(xyz):
    x, y, _ = xyz
    with pytest.raises(InvalidArgument):
        pochhammer_product_series(x + y, 3)


def test_orders(xyz):
    x, _, _ = xyz
    series = euler_inv_series(x, 4)
    assert series_mul(series, euler_inv_series(x, 2)).order == 2
    assert series.truncate(2).order == 2
    with pytest.raises(OrderExceeded):
        series.coefficient(5)
    with pytest.raises(OrderExceeded):
        series.truncate(6)


def test_partial_sum(xyz):
    x, _, _ = xyz
    total = TruncSeries([1, x, x**2], 2).partial_sum()
    assert total == 1 + x + x**2


def test_jhc_substitute_entries():
    ones = [1] * 5
    series = jhc_substitute(ones, 2, 2)
    assert series.coefficient(0, 0) == MultiPoly.const(1)
    one_minus_q = QRational(QPolynomial({0: 1, 1: -1}))
    assert series.coefficient(0, 2) == MultiPoly.const(QRational(QPolynomial({1: 1})) / (one_minus_q * (1 - QRational(QPolynomial({2: 1})))))
    with pytest.raises(InsufficientTerms):
        jhc_substitute(ones, 3, 2)


def test_bivariate_product_is_commutative(xyz):
    x, y, _ = xyz
    a = BiTruncSeries([[1, x], [y, x * y]], (1, 1))
    b = BiTruncSeries([[1, y], [x]], (1, 1))
    assert a * b == b * a
    assert (a * b).coefficient(1, 1) == x * x + y * y + x * y
    assert (a + b) - b == a


def test_prefix_stability(xyz):
    x, y, z = xyz
    long_a, long_b = pochhammer_product_series(x, 9), euler_inv_series(y * z, 9)
    short_a, short_b = long_a.truncate(4), long_b.truncate(4)
    assert series_mul(long_a, long_b).truncate(4) == series_mul(short_a, short_b)
    assert (long_a + long_b).truncate(4) == short_a + short_b
    assert series_inverse(long_a).truncate(4) == series_inverse(short_a)


def test_univariate_product_laws(xyz):
    x, y, z = xyz
    a = TruncSeries([1, x, y, x * z, 3], 4)
    b = pochhammer_product_series(z, 4)
    c = euler_inv_series(x * y, 4)
    assert series_mul(a, b) == series_mul(b, a)
    assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))
    assert series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c)


@pytest.mark.parametrize("name", ["y", "z", "qx"])
def test_product_times_inverse_for_other_arguments(xyz, name):
    x, y, z = xyz
    c = {"y": y, "z": z, "qx": x.scale(q_power(1))}[name]
    assert series_mul(pochhammer_product_series(c, 7), euler_inv_series(c, 7)) == TruncSeries.one(7)
