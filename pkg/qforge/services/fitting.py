"""Search for q-power corrections that make a failing finite-sum identity hold.

Each right-hand term is multiplied by q^e where e is an integer combination of
basis monomials in the outer parameters and the term's summation indices. The
lexicographically least coefficient vector that fixes every grid cell wins.
"""

import itertools
import logging
import math
import re
from dataclasses import dataclass
from typing import Mapping

from qforge.algebra.multipoly import MultiPoly, poly_sum
from qforge.config import get_settings
from qforge.errors import InvalidArgument, UnsupportedIdentity
from qforge.services.identities import IdentityRegistry, IdentitySpec, Term, get_registry, termwise_identity
from qforge.services.verifier import expand_grid

logger = logging.getLogger(__name__)

_FACTOR = re.compile(
    r"^(?:(?P<int>-?\d+)"
    r"|binom\((?P<bvar>[A-Za-z_]\w*)(?P<boff>[+-]\d+)?,(?P<bk>\d+)\)"
    r"|(?P<var>[A-Za-z_]\w*)(?:\^(?P<exp>\d+))?)$"
)


def _falling_binom(n: int, k: int) -> int:
    # polynomial binomial, defined for negative n as well
    numerator = 1
    for i in range(k):
        numerator *= n - i
    return numerator // math.factorial(k)


@dataclass(frozen=True)
class _Factor:
    kind: str
    name: str = ""
    value: int = 0
    offset: int = 0

    def evaluate(self, env: Mapping[str, int]) -> int:
        if self.kind == "int":
            return self.value
        if self.name not in env:
            raise InvalidArgument(f"basis variable '{self.name}' is not an index of this identity")
        if self.kind == "binom":
            return _falling_binom(env[self.name] + self.offset, self.value)
        return env[self.name] ** self.value


@dataclass(frozen=True)
class ExponentBasis:
    text: str
    factors: tuple[_Factor, ...]

    @classmethod
    def parse(cls, text: str) -> "ExponentBasis":
        compact = text.replace(" ", "")
        if not compact:
            raise InvalidArgument("empty basis monomial")
        factors = []
        for part in compact.split("*"):
            match = _FACTOR.match(part)
            if match is None:
                raise InvalidArgument(f"cannot read basis factor '{part}' in '{text}'")
            if match["int"] is not None:
                factors.append(_Factor("int", value=int(match["int"])))
            elif match["bvar"] is not None:
                factors.append(_Factor("binom", match["bvar"], int(match["bk"]), int(match["boff"] or 0)))
            else:
                factors.append(_Factor("power", match["var"], int(match["exp"] or 1)))
        return cls(compact, tuple(factors))

    def evaluate(self, env: Mapping[str, int]) -> int:
        return math.prod(f.evaluate(env) for f in self.factors)


def split_basis(text: str) -> list[str]:
    """Split a comma-separated basis list, keeping commas inside binom(...)."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    parts.append("".join(current).strip())
    return [p for p in parts if p]


@dataclass(frozen=True)
class CorrectionFit:
    identity_id: str
    basis: tuple[str, ...]
    coefficients: tuple[int, ...]
    cells: int
    residual_status: str = "pass"

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.basis, self.coefficients))


def _exponent_vectors(terms: list[Term], params: Mapping[str, int], bases: list[ExponentBasis]) -> list[tuple[int, ...]]:
    return [tuple(b.evaluate({**params, **term.index_map()}) for b in bases) for term in terms]


@dataclass
class _Cell:
    lhs: MultiPoly
    values: tuple[MultiPoly, ...]
    vectors: list[tuple[int, ...]]

    def holds(self, exponents: tuple[int, ...]) -> bool:
        total = poly_sum(value.q_shift(e) for value, e in zip(self.values, exponents))
        return (total - self.lhs).is_zero


def perturb(spec: IdentitySpec, basis: list[str], coefficients: tuple[int, ...]) -> IdentitySpec:
    """Copy of a finite-sum identity whose every right-hand term is multiplied by q^e."""
    if not spec.termwise:
        raise UnsupportedIdentity(f"{spec.id} has no per-term right-hand side")
    bases = [ExponentBasis.parse(b) for b in basis]
    if len(bases) != len(coefficients):
        raise InvalidArgument("one coefficient per basis monomial is required")

    def terms(**params) -> list[Term]:
        out = []
        for term in spec.rhs_terms(params):
            env = {**params, **term.index_map()}
            shift = sum(c * b.evaluate(env) for c, b in zip(coefficients, bases))
            out.append(Term(term.indices, term.value.q_shift(shift)))
        return out

    return termwise_identity(spec.id, spec.params, spec.lhs_builder, terms, f"{spec.description} (perturbed)")


def fit_exponent_correction(
    identity_id: str,
    basis: list[str],
    lo: int,
    hi: int,
    grid: Mapping[str, tuple[int, ...]],
    registry: IdentityRegistry | None = None,
) -> CorrectionFit | None:
    registry = registry or get_registry()
    spec = registry.get(identity_id)
    if not spec.termwise:
        raise UnsupportedIdentity(f"{identity_id} has no per-term exponent structure")
    if lo > hi:
        raise InvalidArgument(f"empty coefficient range {lo}..{hi}")
    bases = [ExponentBasis.parse(b) for b in basis]
    size = (hi - lo + 1) ** len(bases)
    limit = get_settings().fit_max_candidates
    if size > limit:
        raise InvalidArgument(f"search box has {size} candidates, limit is {limit}")

    cells = []
    for _, params in expand_grid({identity_id: grid}, registry):
        values = spec.validate(params)
        lhs = spec.lhs(values)
        if not isinstance(lhs, MultiPoly):
            raise UnsupportedIdentity(f"{identity_id} is not a polynomial identity")
        terms = spec.rhs_terms(values)
        cells.append(_Cell(lhs, tuple(t.value for t in terms), _exponent_vectors(terms, values, bases)))
    cells.sort(key=lambda cell: len(cell.values))
    logger.info("Fitting %s: %s candidates over %s cells", identity_id, size, len(cells))

    memo: dict[tuple[int, tuple[int, ...]], bool] = {}
    for candidate in itertools.product(range(lo, hi + 1), repeat=len(bases)):
        for index, cell in enumerate(cells):
            exponents = tuple(sum(c * v for c, v in zip(candidate, vector)) for vector in cell.vectors)
            key = (index, exponents)
            ok = memo.get(key)
            if ok is None:
                ok = memo[key] = cell.holds(exponents)
            if not ok:
                break
        else:
            logger.info("Fitted %s with %s", identity_id, dict(zip(basis, candidate)))
            return CorrectionFit(identity_id, tuple(b.text for b in bases), tuple(candidate), len(cells))
    logger.info("No correction for %s in %s..%s", identity_id, lo, hi)
    return None
