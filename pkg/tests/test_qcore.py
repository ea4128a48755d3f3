import pytest

from qforge.algebra.multipoly import MultiPoly
from qforge.algebra.qseries import TruncSeries, euler_inv_series, pochhammer_product_series, series_mul
from qforge.algebra.rational import ONE, QPolynomial, QRational, q_factorial, q_power
from qforge.errors import DenominatorDegeneracy, InvalidArgument
from qforge.services.qcore import (
    Eq_series,
    cauchy_P,
    eq_series,
    jhc_terms,
    phi_series,
    q_add_pow,
    qbinom,
    qpochhammer,
    ratio_coeff,
)


def qpoly(*coeffs):
    return QRational(QPolynomial(dict(enumerate(coeffs))))


def test_qpochhammer():
    assert qpochhammer("a", 0) == MultiPoly.const(1)
    assert qpochhammer(q_power(1), 2) == MultiPoly.const(qpoly(1, -1) * qpoly(1, 0, -1))
    assert qpochhammer(0, 5) == MultiPoly.const(1)


def test_qbinom_values():
    assert qbinom(5, 0) == ONE
    assert qbinom(2, 1) == qpoly(1, 1)
    assert qbinom(4, 2) == qpoly(1, 1, 2, 1, 1)
    with pytest.raises(InvalidArgument):
        qbinom(2, 3)
    with pytest.raises(InvalidArgument):
        qbinom(2, -1)


def test_qbinom_matches_factorial_ratio_and_pascal():
    for n in range(1, 21):
        for k in range(n + 1):
            assert qbinom(n, k) == q_factorial(n) / (q_factorial(k) * q_factorial(n - k))
            assert qbinom(n, k) == qbinom(n, n - k)
            if 1 <= k:
                assert qbinom(n, k) == qbinom(n - 1, k - 1) + q_power(k) * (qbinom(n - 1, k) if k < n else 0)


def test_cauchy_polynomial(xyz):
    x, y, _ = xyz
    assert cauchy_P(0, x, y) == MultiPoly.const(1)
    assert cauchy_P(2, x, y).render() == "x^2 - (1 + q)*x*y + q*y^2"
    assert cauchy_P(4, x, 0) == x**4
    for n in range(12):
        assert cauchy_P(n + 1, x, y) == (x - y.q_shift(n)) * cauchy_P(n, x, y)


def test_q_addition_power(xyz):
    x, y, _ = xyz
    assert q_add_pow(1, x, y) == x + y
    assert q_add_pow(2, x, y).render() == "x^2 + (1 + q)*x*y + q*y^2"
    assert len(jhc_terms(3, x, y)) == 4
    for n in range(13):
        assert q_add_pow(n, x, y) == cauchy_P(n, x, -y)


def test_cauchy_generating_function(xyz):
    x, y, _ = xyz
    lhs = TruncSeries([cauchy_P(k, x, y).scale(q_factorial(k).inverse()) for k in range(11)])
    assert lhs == series_mul(euler_inv_series(x, 10), pochhammer_product_series(y, 10))


def test_exponentials(xyz):
    x, _, _ = xyz
    assert eq_series(0, 6) == TruncSeries.one(6)
    assert series_mul(eq_series(x, 12), Eq_series(-x, 12)) == TruncSeries.one(12)
    assert Eq_series(x, 3).coefficient(1) == x.scale(q_factorial(1).inverse())


def test_phi_series(xyz):
    _, _, z = xyz
    a = MultiPoly.var("a")
    assert phi_series([], [], z, 6) == pochhammer_product_series(z, 6)
    assert phi_series([0], [], z, 6) == euler_inv_series(z, 6)
    assert phi_series([a], [], z, 8) == series_mul(pochhammer_product_series(a * z, 8), euler_inv_series(z, 8))


def test_phi_series_degenerate_lower_parameter(xyz):
    _, _, z = xyz
    with pytest.raises(DenominatorDegeneracy):
        phi_series([MultiPoly.var("a")], [q_power(-2)], z, 5)
    with pytest.raises(InvalidArgument):
        phi_series([], [MultiPoly.var("a")], z, 2)


def test_ratio_coeff(xyz):
    x, y, z = xyz
    xi, zeta = MultiPoly.var("xi"), MultiPoly.var("zeta")
    assert ratio_coeff(0, y, zeta, xi, z) == MultiPoly.const(1)
    assert ratio_coeff(1, y, zeta, xi, z) == xi + z - y - zeta
    for m in range(6):
        assert ratio_coeff(m, y, z, xi, z) == cauchy_P(m, xi, y)
        assert ratio_coeff(m, y, zeta, xi, z) == ratio_coeff(m, zeta, y, z, xi)
        assert ratio_coeff(m, y, zeta, xi, z).total_degree == m
