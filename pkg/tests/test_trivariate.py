import math

import pytest

from qforge.algebra.multipoly import ZERO, MultiPoly
from qforge.algebra.rational import QPolynomial, QRational, q_factorial, q_power
from qforge.errors import InvalidArgument
from qforge.services.qcore import cauchy_P
from qforge.services.trivariate import F_gf, F_poly, QDiffVariant, TrivariateParams, psi_poly, qdiff_residual


def sign(k):
    return -1 if k % 2 else 1


def test_small_cases(xyz):
    x, y, z = xyz
    assert F_poly(0) == MultiPoly.const(1)
    assert F_poly(1) == x - y + z
    a = MultiPoly.var("a")
    assert psi_poly(0, a) == MultiPoly.const(1)
    assert psi_poly(1, a) == x - a * x + y


def test_degenerate_collapse(xyz):
    x, y, _ = xyz
    for n in range(11):
        expected = cauchy_P(n, y, x).scale(q_power(-math.comb(n, 2)) * sign(n))
        assert F_poly(n, x, y, 0) == expected


def test_psi_collapse(xyz):
    x, _, _ = xyz
    a = MultiPoly.var("a")
    for n in range(5):
        expected = cauchy_P(n, a * x, x).scale(q_power(-math.comb(n, 2)) * sign(n))
        assert psi_poly(n, a, x, 0) == expected


def test_homogeneity(xyz):
    x, y, z = xyz
    lam = QRational(QPolynomial({0: 2, 1: 1}))
    for n in range(9):
        scaled = F_poly(n).scale_substitute({"x": lam, "y": lam, "z": lam})
        assert scaled == F_poly(n).scale(lam**n)
        assert F_poly(n).total_degree == n


def test_generating_function_consistency():
    series = F_gf(10)
    assert series.coefficient(0) == MultiPoly.const(1)
    x, y, z = MultiPoly.var("x"), MultiPoly.var("y"), MultiPoly.var("z")
    assert series.coefficient(1) == (y - x - z).scale(q_factorial(1).inverse())
    for k in range(11):
        rescale = q_factorial(k) * q_power(-math.comb(k, 2)) * sign(k)
        assert series.coefficient(k).scale(rescale) == F_poly(k)


def test_theorem2_residual_vanishes():
    for n in range(9):
        assert qdiff_residual(F_poly(n), QDiffVariant.THEOREM2) == ZERO


def test_residual_examples(xyz):
    x, y, z = xyz
    assert qdiff_residual(MultiPoly.const(1), "theorem2") == ZERO
    one_minus_q = QRational(QPolynomial({0: 1, 1: -1}))
    expected = ((x.scale(q_power(-1)) - y) * z).scale(one_minus_q)
    assert qdiff_residual(z, "theorem2") == expected


def test_theorem1_residual_with_stray_factor(xyz):
    _, _, z = xyz
    assert qdiff_residual(MultiPoly.const(1), QDiffVariant.THEOREM1) == z * z - z


def test_residual_rejects_foreign_variables():
    with pytest.raises(InvalidArgument):
        qdiff_residual(MultiPoly.var("xi"), QDiffVariant.THEOREM2)


def test_trivariate_params():
    params = TrivariateParams(n=2, x="X", y="Y", z="Z")
    assert params.polynomial() == F_poly(2, "X", "Y", "Z")
    assert params.residual(QDiffVariant.THEOREM2) == ZERO
    with pytest.raises(InvalidArgument):
        TrivariateParams(n=1, x="x", y="x")
    with pytest.raises(InvalidArgument):
        TrivariateParams(n=-1)
