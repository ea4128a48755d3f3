"""Registry of checkable identities and the named suites over them.

Every identity is a pair of builders producing MultiPoly, TruncSeries or
BiTruncSeries values from integer parameters. Identities whose right side is a
finite sum also expose the individual summands, which the exponent fitter
reweights by powers of q.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Mapping

from qforge.algebra.multipoly import ONE_POLY, ZERO, MultiPoly, poly_sum
from qforge.algebra.qseries import BiTruncSeries, TruncSeries, euler_inv_series, jhc_substitute, pochhammer_product_series
from qforge.algebra.rational import QRational, q_factorial, q_power
from qforge.config import get_settings
from qforge.errors import InvalidArgument, UnknownIdentity
from qforge.services.qcore import Eq_series, cauchy_P, eq_series, jhc_terms, phi_series, q_add_pow, qbinom, ratio_coeff
from qforge.services.trivariate import F_gf, F_poly, QDiffVariant, psi_poly, qdiff_residual

logger = logging.getLogger(__name__)

Side = MultiPoly | TruncSeries | BiTruncSeries

x, y, z = MultiPoly.var("x"), MultiPoly.var("y"), MultiPoly.var("z")
xi, zeta = MultiPoly.var("xi"), MultiPoly.var("zeta")
X, Y, Z = MultiPoly.var("X"), MultiPoly.var("Y"), MultiPoly.var("Z")
Omega, U, a = MultiPoly.var("Omega"), MultiPoly.var("U"), MultiPoly.var("a")
SCRATCH = [MultiPoly.var(f"c{i}") for i in range(10)]


@dataclass(frozen=True)
class ParamRange:
    name: str
    lo: int
    hi: int

    def check(self, value: int) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidArgument(f"parameter {self.name} must be an integer, got {value!r}")
        if not self.lo <= value <= self.hi:
            raise InvalidArgument(f"parameter {self.name}={value} outside [{self.lo}, {self.hi}]")
        return value


@dataclass(frozen=True)
class Term:
    """One summand of a finite right-hand side, tagged with its summation indices."""

    indices: tuple[tuple[str, int], ...]
    value: MultiPoly

    def index_map(self) -> dict[str, int]:
        return dict(self.indices)


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    params: tuple[ParamRange, ...]
    lhs_builder: Callable[..., Side]
    rhs_builder: Callable[..., Side]
    description: str
    rhs_terms_builder: Callable[..., list[Term]] | None = None
    order_params: tuple[str, ...] = field(default=())

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    @property
    def termwise(self) -> bool:
        return self.rhs_terms_builder is not None

    def validate(self, params: Mapping[str, int]) -> dict[str, int]:
        unknown = set(params) - set(self.param_names)
        if unknown:
            raise InvalidArgument(f"{self.id} has no parameter(s) {', '.join(sorted(unknown))}")
        values = {}
        for spec in self.params:
            if spec.name not in params:
                raise InvalidArgument(f"{self.id} needs parameter {spec.name}")
            values[spec.name] = spec.check(params[spec.name])
        return values

    def lhs(self, params: Mapping[str, int]) -> Side:
        return self.lhs_builder(**params)

    def rhs(self, params: Mapping[str, int]) -> Side:
        return self.rhs_builder(**params)

    def rhs_terms(self, params: Mapping[str, int]) -> list[Term]:
        if self.rhs_terms_builder is None:
            raise InvalidArgument(f"{self.id} has no per-term right-hand side")
        return self.rhs_terms_builder(**params)


def termwise_identity(
    identity_id: str,
    params: tuple[ParamRange, ...],
    lhs_builder: Callable[..., Side],
    terms_builder: Callable[..., list[Term]],
    description: str,
) -> IdentitySpec:
    def rhs_builder(**values) -> MultiPoly:
        return poly_sum(term.value for term in terms_builder(**values))

    return IdentitySpec(
        id=identity_id,
        params=params,
        lhs_builder=lhs_builder,
        rhs_builder=rhs_builder,
        description=description,
        rhs_terms_builder=terms_builder,
    )


class IdentityRegistry:
    def __init__(self, specs: list[IdentitySpec]):
        self._specs: dict[str, IdentitySpec] = {}
        for spec in specs:
            if spec.id in self._specs:
                raise InvalidArgument(f"duplicate identity id '{spec.id}'")
            self._specs[spec.id] = spec

    def get(self, identity_id: str) -> IdentitySpec:
        try:
            return self._specs[identity_id]
        except KeyError:
            raise UnknownIdentity(f"unknown identity '{identity_id}'") from None

    def with_spec(self, spec: IdentitySpec) -> "IdentityRegistry":
        specs = dict(self._specs)
        specs[spec.id] = spec
        return IdentityRegistry(list(specs.values()))

    def ids(self) -> list[str]:
        return sorted(self._specs)

    def __contains__(self, identity_id: str) -> bool:
        return identity_id in self._specs

    def __iter__(self) -> Iterator[IdentitySpec]:
        return (self._specs[i] for i in self.ids())

    def __len__(self) -> int:
        return len(self._specs)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _b2(k: int) -> int:
    return math.comb(k, 2)


# ---- foundational ----


def _eq27_lhs(n: int) -> MultiPoly:
    return cauchy_P(n, x, -y)


def _eq27_terms(n: int) -> list[Term]:
    return [Term((("k", k),), value) for k, value in enumerate(jhc_terms(n, x, y))]


def _eq212_lhs(N: int) -> TruncSeries:
    return eq_series(x, N) * Eq_series(-x, N)


def _eq212_add_lhs(N: int) -> TruncSeries:
    return eq_series(x, N) * Eq_series(y, N)


def _eq212_add_rhs(N: int) -> TruncSeries:
    return TruncSeries([q_add_pow(k, x, y).scale(q_factorial(k).inverse()) for k in range(N + 1)], N)


def _gener_lhs(N: int) -> TruncSeries:
    return TruncSeries([cauchy_P(k, x, y).scale(q_factorial(k).inverse()) for k in range(N + 1)], N)


def _gener_rhs(N: int) -> TruncSeries:
    return euler_inv_series(x, N) * pochhammer_product_series(y, N)


def _putt_lhs(N: int) -> TruncSeries:
    return phi_series([a], [], z, N)


def _putt_rhs(N: int) -> TruncSeries:
    return pochhammer_product_series(a * z, N) * euler_inv_series(z, N)


def _gf36_lhs(N: int) -> TruncSeries:
    return F_gf(N, x, y, z)


def _gf36_rhs(N: int) -> TruncSeries:
    return TruncSeries([_f_weight(k) * F_poly(k, x, y, z) for k in range(N + 1)], N)


def _f_weight(k: int) -> QRational:
    # (-1)^k q^C(k,2) / (q;q)_k, the weight of F_k in its generating function
    return q_power(_b2(k)) * _sign(k) / q_factorial(k)


def jhc_sequence(seq: int, length: int) -> list[MultiPoly]:
    if seq == 0:
        return [ONE_POLY] * length
    if seq == 1:
        return [MultiPoly.const(q_power(j)) for j in range(length)]
    if seq == 2:
        return [cauchy_P(j, x, y) for j in range(length)]
    if seq == 3:
        return [SCRATCH[j % 10] * Omega ** (j // 10) for j in range(length)]
    raise InvalidArgument(f"unknown test sequence {seq}")


def _jhc314_lhs(m: int, n: int, seq: int) -> BiTruncSeries:
    values = jhc_sequence(seq, m + n + 1)
    rows = [[ZERO] * (n + 1) for _ in range(m + 1)]
    for j in range(m + n + 1):
        weight = q_factorial(j).inverse()
        # coefficient of u^(j-s) t^s in (u (+) t)^j
        for s, coeff in enumerate(jhc_terms(j, ONE_POLY, ONE_POLY)):
            i = j - s
            if i <= m and s <= n:
                rows[i][s] = rows[i][s] + values[j] * coeff.scale(weight)
    return BiTruncSeries(rows, (m, n))


def _jhc314_rhs(m: int, n: int, seq: int) -> BiTruncSeries:
    return jhc_substitute(jhc_sequence(seq, m + n + 1), m, n)


# ---- connection formulas ----


def _connection_terms(k: int, l: int, kernel: Callable[[int], MultiPoly], tail: Callable[[int], MultiPoly], exponent, signed=True) -> list[Term]:
    products: dict[int, MultiPoly] = {}
    terms = []
    for n in range(k + 1):
        for r in range(l + 1):
            m = n + r
            if m not in products:
                products[m] = kernel(m) * tail(k + l - m)
            scalar = qbinom(k, n) * qbinom(l, r) * q_power(exponent(n, r))
            if signed and (n + r) % 2:
                scalar = -scalar
            terms.append(Term((("n", n), ("r", r)), products[m].scale(scalar)))
    return terms


def _single_terms(l: int, kernel: Callable[[int], MultiPoly], tail: Callable[[int], MultiPoly], exponent, signed=True) -> list[Term]:
    terms = []
    for r in range(l + 1):
        scalar = qbinom(l, r) * q_power(exponent(r))
        if signed and r % 2:
            scalar = -scalar
        terms.append(Term((("r", r),), (kernel(r) * tail(l - r)).scale(scalar)))
    return terms


def _kernel_thm1(m: int) -> MultiPoly:
    return ratio_coeff(m, y, zeta, xi, z)


def _kernel_cor(m: int) -> MultiPoly:
    return cauchy_P(m, xi, y)


def _f_xyz(n: int) -> MultiPoly:
    return F_poly(n, x, y, z)


def _psi_xy(n: int) -> MultiPoly:
    return psi_poly(n, a, x, y)


def _thm31_general_terms(k: int, l: int) -> list[Term]:
    return _connection_terms(k, l, _kernel_thm1, _f_xyz, lambda n, r: -math.comb(n + 1, 2) - r * (n + l + 1) - (k + l) * (n + r))


def _thm31_l_terms(l: int) -> list[Term]:
    return _single_terms(l, _kernel_thm1, _f_xyz, lambda r: -r * (2 * l + 1))


def _conn_l_terms(l: int) -> list[Term]:
    return _single_terms(l, _kernel_thm1, _f_xyz, lambda r: math.comb(r + 1, 2) - r * l)


def _cor32_terms(k: int, l: int) -> list[Term]:
    return _connection_terms(k, l, _kernel_cor, _f_xyz, lambda n, r: -math.comb(n + 1, 2) - r * (n + l + 1) - (k + l) * (n + r))


def _cor32_l_terms(l: int) -> list[Term]:
    return _single_terms(l, _kernel_cor, _f_xyz, lambda r: -r * (2 * l + 1))


def _cor_psi_terms(k: int, l: int) -> list[Term]:
    return _connection_terms(
        k,
        l,
        _kernel_cor,
        _psi_xy,
        lambda n, r: _b2(n + r) - math.comb(n + 1, 2) - r * (n + l + 1) - (k + l) * (n + r),
        signed=False,
    )


def _cor_psi_l_terms(l: int) -> list[Term]:
    return _single_terms(l, _kernel_cor, _psi_xy, lambda r: _b2(r) - r * (2 * l + 1), signed=False)


# ---- product formulas ----


def _product_terms(n: int, r: int, left: Callable[[int], MultiPoly], right: Callable[[int], MultiPoly]) -> list[Term]:
    lefts = [left(k) for k in range(n + 1)]
    rights = [right(m) for m in range(r + 1)]
    terms = []
    for k in range(n + 1):
        for m in range(r + 1):
            scalar = qbinom(n, k) * qbinom(r, m) * q_power(math.comb(k + 1, 2) + math.comb(m + 1, 2) - m * r - n * k)
            if (k + m) % 2:
                scalar = -scalar
            terms.append(Term((("k", k), ("m", m)), (lefts[k] * rights[m]).scale(scalar)))
    return terms


def _thm4_lhs(n: int, r: int) -> MultiPoly:
    return F_poly(n, x, xi, zeta) * F_poly(r, X, Omega, U)


def _thm4_terms(n: int, r: int) -> list[Term]:
    return _product_terms(
        n,
        r,
        lambda k: ratio_coeff(k, zeta, y, xi, z) * F_poly(n - k, x, y, z),
        lambda m: ratio_coeff(m, U, Y, Omega, Z) * F_poly(r - m, X, Y, Z),
    )


def _thm4_psi_lhs(n: int, r: int) -> MultiPoly:
    return psi_poly(n, a, x, xi) * psi_poly(r, a, X, Omega)


def _thm4_psi_terms(n: int, r: int) -> list[Term]:
    ax, aX = a * x, a * X
    return _product_terms(
        n,
        r,
        lambda k: ratio_coeff(k, xi, ax, ax, y) * psi_poly(n - k, a, x, y),
        lambda m: ratio_coeff(m, Omega, aX, aX, Y) * psi_poly(r - m, a, X, Y),
    )


# ---- double series ----


def _f_sequence(length: int, x_slot: MultiPoly, y_slot: MultiPoly, z_slot: MultiPoly) -> list[MultiPoly]:
    return [F_poly(j, x_slot, y_slot, z_slot).scale(q_power(_b2(j)) * _sign(j)) for j in range(length)]


def _eq321_lhs(m: int, n: int) -> BiTruncSeries:
    length = m + n + 1
    kernel = jhc_substitute([_kernel_thm1(j) for j in range(length)], m, n)
    return kernel * jhc_substitute(_f_sequence(length, x, y, z), m, n)


def _eq321_rhs(m: int, n: int) -> BiTruncSeries:
    return jhc_substitute(_f_sequence(m + n + 1, x, xi, zeta), m, n)


def _qdiff_lhs(variant: QDiffVariant) -> Callable[..., MultiPoly]:
    def build(n: int) -> MultiPoly:
        return qdiff_residual(F_poly(n, x, y, z), variant)

    return build


def _zero(**_) -> MultiPoly:
    return ZERO


def _one_series(N: int) -> TruncSeries:
    return TruncSeries.one(N)


def _index(name: str, hi: int = 8) -> ParamRange:
    return ParamRange(name, 0, hi)


def build_registry(max_order: int) -> IdentityRegistry:
    order = ParamRange("N", 0, max_order)

    specs = [
        termwise_identity("eq2.7", (ParamRange("n", 0, 40),), _eq27_lhs, _eq27_terms, "P_n(x,-y) equals the q-addition power (x (+) y)^n"),
        IdentitySpec("eq2.12", (order,), _eq212_lhs, _one_series, "e_q(xt) E_q(-xt) = 1", order_params=("N",)),
        IdentitySpec(
            "eq2.12-add", (order,), _eq212_add_lhs, _eq212_add_rhs,
            "e_q(xt) E_q(yt) generates (x (+) y)^k / (q;q)_k", order_params=("N",),
        ),
        IdentitySpec("gener", (order,), _gener_lhs, _gener_rhs, "sum P_n(x,y) t^n/(q;q)_n = (yt;q)/(xt;q)", order_params=("N",)),
        IdentitySpec("putt", (order,), _putt_lhs, _putt_rhs, "1phi0(a; -; q, z) = (az;q)/(z;q)", order_params=("N",)),
        IdentitySpec("gf3.6", (order,), _gf36_lhs, _gf36_rhs, "(xt;q)(zt;q)/(yt;q) generates F_n(x,y,z)", order_params=("N",)),
        IdentitySpec(
            "jhc3.14",
            (ParamRange("m", 0, max_order), ParamRange("n", 0, max_order), ParamRange("seq", 0, 3)),
            _jhc314_lhs, _jhc314_rhs, "sum F(j) (u (+) t)^j/(q;q)_j expands as a double series",
            order_params=("m", "n"),
        ),
        termwise_identity(
            "thm3.1-general", (_index("k"), _index("l")), lambda k, l: F_poly(k + l, x, xi, zeta), _thm31_general_terms,
            "double-sum connection formula for F_{k+l}(x, xi, zeta)",
        ),
        termwise_identity(
            "thm3.1-l", (_index("l"),), lambda l: F_poly(l, x, xi, zeta), _thm31_l_terms,
            "single-sum connection formula for F_l(x, xi, zeta)",
        ),
        termwise_identity(
            "conn-l", (_index("l"),), lambda l: F_poly(l, x, xi, zeta), _conn_l_terms,
            "single-sum connection formula read off the generating-function ratio",
        ),
        termwise_identity(
            "cor3.2", (_index("k"), _index("l")), lambda k, l: F_poly(k + l, x, xi, z), _cor32_terms,
            "double-sum connection formula for F_{k+l}(x, xi, z)",
        ),
        termwise_identity(
            "cor3.2-l", (_index("l"),), lambda l: F_poly(l, x, xi, z), _cor32_l_terms,
            "single-sum connection formula for F_l(x, xi, z)",
        ),
        termwise_identity(
            "cor-psi", (_index("k"), _index("l")), lambda k, l: psi_poly(k + l, a, x, xi), _cor_psi_terms,
            "double-sum connection formula for the second Hahn polynomials",
        ),
        termwise_identity(
            "cor-psi-l", (_index("l"),), lambda l: psi_poly(l, a, x, xi), _cor_psi_l_terms,
            "single-sum connection formula for the second Hahn polynomials",
        ),
        termwise_identity(
            "thm4", (_index("n", 6), _index("r", 6)), _thm4_lhs, _thm4_terms,
            "product formula F_n(x, xi, zeta) F_r(X, Omega, U)",
        ),
        termwise_identity(
            "thm4-psi", (_index("n", 6), _index("r", 6)), _thm4_psi_lhs, _thm4_psi_terms,
            "product formula for two second Hahn polynomials",
        ),
        IdentitySpec(
            "eq3.21", (_index("m", 6), _index("n", 6)), _eq321_lhs, _eq321_rhs,
            "kernel and F_n series after substituting u (+) t", order_params=("m", "n"),
        ),
        IdentitySpec(
            "qdiff-thm1", (_index("n", 12),), _qdiff_lhs(QDiffVariant.THEOREM1), _zero,
            "q-difference equation with the extra z factor, applied to F_n",
        ),
        IdentitySpec(
            "qdiff-thm2", (_index("n", 12),), _qdiff_lhs(QDiffVariant.THEOREM2), _zero,
            "q-difference equation applied to F_n",
        ),
    ]
    registry = IdentityRegistry(specs)
    logger.debug("Built identity registry with %s identities", len(registry))
    return registry


@lru_cache
def get_registry() -> IdentityRegistry:
    return build_registry(get_settings().max_order)


Grid = dict[str, dict[str, tuple[int, ...]]]


def _span(lo: int, hi: int) -> tuple[int, ...]:
    return tuple(range(lo, hi + 1))


SUITES: dict[str, Grid] = {
    "foundational": {
        "eq2.7": {"n": _span(0, 12)},
        "gener": {"N": (10,)},
        "putt": {"N": (12,)},
        "eq2.12": {"N": (16,)},
        "eq2.12-add": {"N": (10,)},
        "gf3.6": {"N": (10,)},
        "jhc3.14": {"m": (8,), "n": (8,), "seq": _span(0, 3)},
    },
    "theorems": {
        "thm3.1-general": {"k": _span(0, 3), "l": _span(0, 3)},
        "thm3.1-l": {"l": _span(0, 4)},
        "cor3.2": {"k": _span(0, 3), "l": _span(0, 3)},
        "thm4": {"n": _span(0, 3), "r": _span(0, 3)},
        "cor-psi": {"k": _span(0, 3), "l": _span(0, 3)},
    },
    "derived": {
        "cor3.2-l": {"l": _span(0, 4)},
        "cor-psi-l": {"l": _span(0, 4)},
        "thm4-psi": {"n": _span(0, 2), "r": _span(0, 2)},
        "conn-l": {"l": _span(0, 4)},
        "eq3.21": {"m": (3,), "n": (3,)},
    },
    "qdiff": {
        "qdiff-thm1": {"n": _span(0, 8)},
        "qdiff-thm2": {"n": _span(0, 8)},
    },
}
SUITES["all"] = {identity_id: grid for suite in list(SUITES.values()) for identity_id, grid in suite.items()}


def suite_grid(name: str) -> Grid:
    try:
        return SUITES[name]
    except KeyError:
        raise InvalidArgument(f"unknown suite '{name}' (known: {', '.join(sorted(SUITES))})") from None


def default_grid(identity_id: str) -> dict[str, tuple[int, ...]]:
    for name in ("theorems", "derived", "foundational", "qdiff"):
        if identity_id in SUITES[name]:
            return SUITES[name][identity_id]
    raise UnknownIdentity(f"no default grid for '{identity_id}'")
