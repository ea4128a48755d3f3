import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from qforge.algebra.multipoly import MultiPoly, monomial_key, render_monomial
from qforge.algebra.qseries import BiTruncSeries, TruncSeries
from qforge.algebra.rational import QRational
from qforge.config import get_settings
from qforge.errors import InvalidArgument
from qforge.services.identities import IdentityRegistry, get_registry

logger = logging.getLogger(__name__)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


@dataclass(frozen=True)
class Mismatch:
    monomial: str
    lhs: QRational
    rhs: QRational


@dataclass(frozen=True)
class IdentityReport:
    id: str
    params: dict[str, int]
    status: Status
    evidence: Mismatch | None = None
    elapsed: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


Cell = tuple[str, dict[str, int]]


def _components(side) -> list[tuple[str, MultiPoly]]:
    if isinstance(side, MultiPoly):
        return [("", side)]
    if isinstance(side, TruncSeries):
        return [(f"t^{k}", c) for k, c in enumerate(side.coeffs)]
    if isinstance(side, BiTruncSeries):
        return [(f"u^{i}*t^{j}", c) for i, row in enumerate(side.coeffs) for j, c in enumerate(row)]
    raise InvalidArgument(f"cannot compare values of type {type(side).__name__}")


def first_mismatch(lhs, rhs) -> Mismatch | None:
    """Graded-lex least monomial where lhs and rhs differ, or None when lhs - rhs is zero."""
    left, right = _components(lhs), _components(rhs)
    if [label for label, _ in left] != [label for label, _ in right]:
        raise InvalidArgument("the two sides have different shapes")
    for (label, lp), (_, rp) in zip(left, right):
        diff = lp - rp
        if diff.is_zero:
            continue
        exps = min(diff.monomials(), key=monomial_key)
        mono = render_monomial(exps)
        text = "*".join(part for part in (label, mono) if part) or "1"
        return Mismatch(text, lp.coefficient(exps), rp.coefficient(exps))
    return None


def check_identity(identity_id: str, params: Mapping[str, int], registry: IdentityRegistry | None = None) -> IdentityReport:
    registry = registry or get_registry()
    spec = registry.get(identity_id)
    values = spec.validate(params)
    started = time.perf_counter()
    evidence = first_mismatch(spec.lhs(values), spec.rhs(values))
    elapsed = time.perf_counter() - started
    status = Status.PASS if evidence is None else Status.FAIL
    logger.debug("Checked %s %s: %s in %.3fs", identity_id, values, status.value, elapsed)
    return IdentityReport(id=identity_id, params=values, status=status, evidence=evidence, elapsed=elapsed)


def expand_grid(grid: Mapping[str, Mapping[str, tuple[int, ...]]], registry: IdentityRegistry | None = None) -> list[Cell]:
    """Cells in report order: identity id, then parameter tuples in declaration order."""
    registry = registry or get_registry()
    cells: list[Cell] = []
    for identity_id in sorted(grid):
        spec = registry.get(identity_id)
        ranges = grid[identity_id]
        names = [name for name in spec.param_names if name in ranges]
        extra = set(ranges) - set(names)
        if extra:
            raise InvalidArgument(f"{identity_id} has no parameter(s) {', '.join(sorted(extra))}")
        axes = [sorted(set(ranges[name])) for name in names]
        for combo in itertools.product(*axes):
            cells.append((identity_id, dict(zip(names, combo))))
    return cells


def _check_cell(cell: Cell, registry: IdentityRegistry | None = None) -> IdentityReport:
    identity_id, params = cell
    try:
        return check_identity(identity_id, params, registry)
    except Exception as exc:
        logger.exception("Check failed for %s %s", identity_id, params)
        return IdentityReport(id=identity_id, params=dict(params), status=Status.ERROR, error=f"{type(exc).__name__}: {exc}")


def check_suite(
    grid: Mapping[str, Mapping[str, tuple[int, ...]]],
    registry: IdentityRegistry | None = None,
    max_concurrency: int | None = None,
) -> list[IdentityReport]:
    cells = expand_grid(grid, registry)
    if not cells:
        return []
    workers = max_concurrency or get_settings().max_concurrency
    logger.info("Checking %s cells over %s identities (workers=%s)", len(cells), len(grid), workers)

    # custom registries hold local closures and stay in-process
    if workers > 1 and registry is None and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_check_cell, cells))
    else:
        reports = [_check_cell(cell, registry) for cell in cells]

    counts = summarize(reports)
    logger.info("Suite done: %s passed, %s failed, %s errors", counts["pass"], counts["fail"], counts["error"])
    return reports


def summarize(reports: list[IdentityReport]) -> dict[str, int]:
    counts = {status.value: 0 for status in Status}
    for report in reports:
        counts[report.status.value] += 1
    return counts

