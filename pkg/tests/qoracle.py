"""Independent numeric oracle: evaluates identities at rational points straight from the definitions.

Nothing here imports qforge. q-binomials come from the q-factorial ratio, Cauchy
polynomials from their product, F_n from its defining sum and the four-product
kernel from truncated list-based power series.
"""

import json
import random
import sys
from fractions import Fraction
from math import comb

VARS = ("x", "y", "z", "xi", "zeta", "X", "Y", "Z", "Omega", "U", "a")


def qfact(n, q):
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= 1 - q**j
    return out


def qbinom(n, k, q):
    return qfact(n, q) / (qfact(k, q) * qfact(n - k, q))


def cauchy(n, x, y, q):
    out = Fraction(1)
    for i in range(n):
        out *= x - q**i * y
    return out


def F(n, x, y, z, q):
    total = sum(qbinom(n, k, q) * (-1) ** k * q ** comb(k, 2) * cauchy(n - k, y, x, q) * z**k for k in range(n + 1))
    return (-1) ** n * q ** (-comb(n, 2)) * total


def psi(n, a, x, y, q):
    return F(n, x, a * x, y, q)


def _product_series(c, order, q):
    return [(-1) ** k * q ** comb(k, 2) * c**k / qfact(k, q) for k in range(order + 1)]


def _inverse_series(c, order, q):
    return [c**k / qfact(k, q) for k in range(order + 1)]


def _mul(a, b):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(min(len(a), len(b)))]


def kernel(m, alpha, beta, gamma, delta, q):
    series = _mul(
        _mul(_product_series(alpha, m, q), _product_series(beta, m, q)),
        _mul(_inverse_series(gamma, m, q), _inverse_series(delta, m, q)),
    )
    return series[m] * qfact(m, q)


def _double(k, l, q, kernel_fn, tail_fn, exponent, signed=True):
    total = Fraction(0)
    for n in range(k + 1):
        for r in range(l + 1):
            sign = (-1) ** (n + r) if signed else 1
            total += qbinom(k, n, q) * qbinom(l, r, q) * sign * q ** exponent(n, r) * kernel_fn(n + r) * tail_fn(k + l - n - r)
    return total


def _single(l, q, kernel_fn, tail_fn, exponent, signed=True):
    total = Fraction(0)
    for r in range(l + 1):
        sign = (-1) ** r if signed else 1
        total += qbinom(l, r, q) * sign * q ** exponent(r) * kernel_fn(r) * tail_fn(l - r)
    return total


def sides(identity_id, params, p):
    """(lhs, rhs) of a polynomial identity at the point p (a dict including q)."""
    q = p["q"]
    x, y, z, xi, zeta = p["x"], p["y"], p["z"], p["xi"], p["zeta"]
    X, Y, Z, Omega, U, a = p["X"], p["Y"], p["Z"], p["Omega"], p["U"], p["a"]

    def thm_kernel(m):
        return kernel(m, y, zeta, xi, z, q)

    def cor_kernel(m):
        return cauchy(m, xi, y, q)

    def f_tail(m):
        return F(m, x, y, z, q)

    def psi_tail(m):
        return psi(m, a, x, y, q)

    if identity_id == "thm3.1-general":
        k, l = params["k"], params["l"]
        rhs = _double(k, l, q, thm_kernel, f_tail, lambda n, r: -comb(n + 1, 2) - r * (n + l + 1) - (k + l) * (n + r))
        return F(k + l, x, xi, zeta, q), rhs
    if identity_id == "thm3.1-l":
        l = params["l"]
        return F(l, x, xi, zeta, q), _single(l, q, thm_kernel, f_tail, lambda r: -r * (2 * l + 1))
    if identity_id == "conn-l":
        l = params["l"]
        return F(l, x, xi, zeta, q), _single(l, q, thm_kernel, f_tail, lambda r: comb(r + 1, 2) - r * l)
    if identity_id == "cor3.2":
        k, l = params["k"], params["l"]
        rhs = _double(k, l, q, cor_kernel, f_tail, lambda n, r: -comb(n + 1, 2) - r * (n + l + 1) - (k + l) * (n + r))
        return F(k + l, x, xi, z, q), rhs
    if identity_id == "cor3.2-l":
        l = params["l"]
        return F(l, x, xi, z, q), _single(l, q, cor_kernel, f_tail, lambda r: -r * (2 * l + 1))
    if identity_id == "cor-psi":
        k, l = params["k"], params["l"]
        rhs = _double(
            k, l, q, cor_kernel, psi_tail,
            lambda n, r: comb(n + r, 2) - comb(n + 1, 2) - r * (n + l + 1) - (k + l) * (n + r),
            signed=False,
        )
        return psi(k + l, a, x, xi, q), rhs
    if identity_id == "cor-psi-l":
        l = params["l"]
        rhs = _single(l, q, cor_kernel, psi_tail, lambda r: comb(r, 2) - r * (2 * l + 1), signed=False)
        return psi(l, a, x, xi, q), rhs
    if identity_id in ("thm4", "thm4-psi"):
        n, r = params["n"], params["r"]
        if identity_id == "thm4":
            lhs = F(n, x, xi, zeta, q) * F(r, X, Omega, U, q)

            def left(k):
                return kernel(k, zeta, y, xi, z, q) * F(n - k, x, y, z, q)

            def right(m):
                return kernel(m, U, Y, Omega, Z, q) * F(r - m, X, Y, Z, q)
        else:
            lhs = psi(n, a, x, xi, q) * psi(r, a, X, Omega, q)

            def left(k):
                return kernel(k, xi, a * x, a * x, y, q) * psi(n - k, a, x, y, q)

            def right(m):
                return kernel(m, Omega, a * X, a * X, Y, q) * psi(r - m, a, X, Y, q)

        rhs = Fraction(0)
        for k in range(n + 1):
            for m in range(r + 1):
                weight = qbinom(n, k, q) * qbinom(r, m, q) * (-1) ** (k + m)
                rhs += weight * q ** (comb(k + 1, 2) + comb(m + 1, 2) - m * r - n * k) * left(k) * right(m)
        return lhs, rhs
    if identity_id in ("qdiff-thm1", "qdiff-thm2"):
        n = params["n"]

        def f(u, v, w):
            return F(n, u, v, w, q)

        lhs = (x / q - y) * (f(x, y, z) - f(x, y, q * z))
        if identity_id == "qdiff-thm2":
            rhs = z * (f(x / q, y, q * z) - f(x, q * y, q * z))
        else:
            rhs = z * (f(x / q, y, q * z) - z * f(x, q * y, q * z))
        return lhs, rhs
    raise KeyError(identity_id)


def random_point(rng: random.Random) -> dict:
    point = {name: Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 7)) for name in VARS}
    point["q"] = Fraction(rng.randint(2, 9), rng.randint(11, 19))
    return point


def status(identity_id, params, rng: random.Random, points: int = 2) -> str:
    for _ in range(points):
        lhs, rhs = sides(identity_id, params, random_point(rng))
        if lhs != rhs:
            return "fail"
    return "pass"


THEOREM_GRID = {
    "cor-psi": (("k", range(4)), ("l", range(4))),
    "cor3.2": (("k", range(4)), ("l", range(4))),
    "thm3.1-general": (("k", range(4)), ("l", range(4))),
    "thm3.1-l": (("l", range(5)),),
    "thm4": (("n", range(4)), ("r", range(4))),
}


def status_line(identity_id, params, outcome) -> str:
    return json.dumps({"id": identity_id, "params": params, "status": outcome})


def _cells(axes):
    if not axes:
        yield {}
        return
    (name, values), rest = axes[0], axes[1:]
    for value in values:
        for tail in _cells(rest):
            yield {name: value, **tail}


def theorem_status_table(rng: random.Random) -> str:
    """One JSON object per line, in report order; the committed theorem fixture is this output."""
    lines = []
    for identity_id in sorted(THEOREM_GRID):
        for params in _cells(THEOREM_GRID[identity_id]):
            lines.append(status_line(identity_id, params, status(identity_id, params, rng)))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    sys.stdout.write(theorem_status_table(random.Random(0)))
