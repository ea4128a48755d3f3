import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from qforge.algebra.multipoly import VARIABLE_INDEX, ZERO, MultiPoly, as_poly
from qforge.algebra.qseries import TruncSeries, euler_inv_series, pochhammer_product_series, series_mul
from qforge.algebra.rational import q_power
from qforge.errors import InvalidArgument
from qforge.services.qcore import cauchy_P, qbinom

logger = logging.getLogger(__name__)


class QDiffVariant(str, Enum):
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"


@dataclass(frozen=True)
class TrivariateParams:
    n: int = 0
    x: str = "x"
    y: str = "y"
    z: str = "z"

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgument(f"F_n needs n >= 0, got {self.n}")
        for name in self.slots:
            if name not in VARIABLE_INDEX:
                raise InvalidArgument(f"unknown slot variable '{name}'")
        if len(set(self.slots)) != 3:
            raise InvalidArgument(f"slot variables must be distinct, got {self.slots}")

    @property
    def slots(self) -> tuple[str, str, str]:
        return self.x, self.y, self.z

    def polynomial(self) -> MultiPoly:
        return F_poly(self.n, self.x, self.y, self.z)

    def residual(self, variant: QDiffVariant) -> MultiPoly:
        return qdiff_residual(self.polynomial(), variant, self.slots)


def F_poly(n: int, x="x", y="y", z="z") -> MultiPoly:
    return _F_poly(n, as_poly(x), as_poly(y), as_poly(z))


@lru_cache(maxsize=4096)
def _F_poly(n: int, x: MultiPoly, y: MultiPoly, z: MultiPoly) -> MultiPoly:
    if n < 0:
        raise InvalidArgument(f"F_n needs n >= 0, got {n}")
    total = ZERO
    z_power = MultiPoly.const(1)
    for k in range(n + 1):
        scalar = qbinom(n, k) * q_power(math.comb(k, 2))
        if k % 2:
            scalar = -scalar
        total = total + (cauchy_P(n - k, y, x) * z_power).scale(scalar)
        z_power = z_power * z
    prefactor = q_power(-math.comb(n, 2))
    return total.scale(-prefactor if n % 2 else prefactor)


def F_gf(order: int, x="x", y="y", z="z") -> TruncSeries:
    """(xt;q)_oo (zt;q)_oo / (yt;q)_oo truncated at t^order."""
    product = series_mul(pochhammer_product_series(x, order), pochhammer_product_series(z, order))
    return series_mul(product, euler_inv_series(y, order))


def psi_poly(n: int, a, x="x", y="y") -> MultiPoly:
    """Second Hahn polynomial: F_n(x, a*x, y)."""
    x = as_poly(x)
    return F_poly(n, x, as_poly(a) * x, y)


def qdiff_residual(f: MultiPoly, variant: QDiffVariant | str, slots: tuple[str, str, str] = ("x", "y", "z")) -> MultiPoly:
    """lhs - rhs of the q-difference equation in the slots (x, y, z); zero when f satisfies it."""
    variant = QDiffVariant(variant)
    foreign = set(f.variables()) - set(slots)
    if foreign:
        raise InvalidArgument(f"q-difference residual over {slots} got foreign variables {sorted(foreign)}")
    sx, sy, sz = slots
    x, z = MultiPoly.var(sx), MultiPoly.var(sz)
    q = q_power(1)

    f_qz = f.scale_substitute({sz: q})
    f_x_qz = f.scale_substitute({sx: q_power(-1), sz: q})
    f_y_qz = f.scale_substitute({sy: q, sz: q})

    lhs = (x.scale(q_power(-1)) - MultiPoly.var(sy)) * (f - f_qz)
    if variant is QDiffVariant.THEOREM2:
        rhs = z * (f_x_qz - f_y_qz)
    else:
        # printed with an extra z on the last term
        rhs = z * (f_x_qz - z * f_y_qz)
    residual = lhs - rhs
    logger.debug("q-difference residual (%s) has %s terms", variant.value, len(residual))
    return residual
