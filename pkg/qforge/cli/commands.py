import argparse
import logging
import sys
from pathlib import Path
from typing import TextIO

from qforge.cli.expr import evaluate, parse_expression, render
from qforge.config import get_settings
from qforge.errors import InvalidArgument, QForgeError
from qforge.schemas import ExpansionOut, FitOut, IdentityOut, SuiteOut, dump_json
from qforge.services.fitting import fit_exponent_correction, split_basis
from qforge.services.identities import SUITES, default_grid, get_registry, suite_grid
from qforge.services.verifier import IdentityReport, Status, check_suite, expand_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _parse_range(text: str) -> tuple[int, ...]:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
        if lo > hi:
            raise InvalidArgument(f"empty range {text}")
        return tuple(range(lo, hi + 1))
    return (int(text),)


def _parse_params(items: list[str]) -> dict[str, tuple[int, ...]]:
    params: dict[str, tuple[int, ...]] = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise InvalidArgument(f"--param expects NAME=V or NAME=LO..HI, got '{item}'")
        try:
            params[name.strip()] = _parse_range(value.strip())
        except ValueError:
            raise InvalidArgument(f"--param {name} needs integer values, got '{value}'") from None
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qforge", description="Exact q-series kernel and identity verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="check identities exactly")
    target = verify.add_mutually_exclusive_group(required=True)
    target.add_argument("--suite", choices=sorted(SUITES))
    target.add_argument("--id", dest="identity_id")
    verify.add_argument("--param", action="append", default=[], metavar="NAME=V|LO..HI")
    verify.add_argument("--order", type=int, help="truncation order for series identities")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--out", type=Path)
    verify.add_argument("--timing", action="store_true")

    expand = sub.add_parser("expand", help="expand an expression to canonical form")
    expand.add_argument("expression")
    expand.add_argument("--format", choices=("text", "json"), default="text")

    fit = sub.add_parser("fit", help="search for a q-power correction of a finite-sum identity")
    fit.add_argument("--id", dest="identity_id", required=True)
    fit.add_argument("--basis", required=True, help="comma-separated monomials, e.g. 'r,r*l,binom(r+1,2)'")
    fit.add_argument("--range", dest="coeff_range", default="-3..3", metavar="LO..HI")
    fit.add_argument("--param", action="append", default=[], metavar="NAME=V|LO..HI")
    fit.add_argument("--format", choices=("text", "json"), default="text")

    listing = sub.add_parser("list", help="list registered identities")
    listing.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _format_report(report: IdentityReport, timing: bool) -> str:
    params = " ".join(f"{k}={v}" for k, v in report.params.items())
    line = f"{report.id} {params}: {report.status.value}"
    if report.evidence is not None:
        ev = report.evidence
        line += f" at {ev.monomial}: lhs = {ev.lhs.render()}, rhs = {ev.rhs.render()}"
    if report.error:
        line += f" ({report.error})"
    if timing:
        line += f" [{report.elapsed:.3f}s]"
    return line


def _emit(text: str, out: Path | None, stdout: TextIO) -> None:
    if out is None:
        stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _verify(args, stdout: TextIO) -> int:
    registry = get_registry()
    if args.suite:
        if args.param:
            raise InvalidArgument("--param applies to --id, not to --suite")
        label = args.suite
        grid = {identity_id: dict(ranges) for identity_id, ranges in suite_grid(args.suite).items()}
    else:
        label = args.identity_id
        registry.get(args.identity_id)
        ranges = _parse_params(args.param) if args.param else dict(default_grid(args.identity_id))
        grid = {args.identity_id: ranges}
    if args.order is not None:
        for identity_id, ranges in grid.items():
            for name in registry.get(identity_id).order_params:
                ranges[name] = (args.order,)

    # reject bad cells before any work starts
    for identity_id, params in expand_grid(grid, registry):
        registry.get(identity_id).validate(params)

    reports = check_suite(grid)
    if args.format == "json":
        text = SuiteOut.from_reports(label, reports, args.timing).to_json()
    else:
        lines = [_format_report(r, args.timing) for r in reports]
        summary = SuiteOut.from_reports(label, reports).summary
        lines.append(f"summary: pass={summary.passed} fail={summary.failed} error={summary.errors}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out, stdout)
    return EXIT_OK if all(r.status is Status.PASS for r in reports) else EXIT_FAIL


def _expand(args, stdout: TextIO) -> int:
    ast = parse_expression(args.expression)
    polynomial = evaluate(ast).render()
    if args.format == "json":
        stdout.write(dump_json(ExpansionOut(expression=render(ast), polynomial=polynomial).model_dump()))
    else:
        stdout.write(polynomial + "\n")
    return EXIT_OK


def _fit(args, stdout: TextIO) -> int:
    basis = split_basis(args.basis)
    if not basis:
        raise InvalidArgument("--basis needs at least one monomial")
    try:
        lo_text, hi_text = args.coeff_range.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise InvalidArgument(f"--range expects LO..HI, got '{args.coeff_range}'") from None
    grid = _parse_params(args.param) if args.param else default_grid(args.identity_id)
    fit = fit_exponent_correction(args.identity_id, basis, lo, hi, grid)
    cells = len(expand_grid({args.identity_id: grid}))
    if args.format == "json":
        stdout.write(dump_json(FitOut.from_fit(args.identity_id, basis, lo, hi, fit, cells).model_dump()))
    elif fit is None:
        stdout.write(f"{args.identity_id}: no correction with coefficients in {lo}..{hi} over {cells} cells\n")
    else:
        coeffs = " ".join(f"{b}={c}" for b, c in fit.as_dict().items())
        stdout.write(f"{args.identity_id}: q-power correction {coeffs} over {fit.cells} cells\n")
    return EXIT_OK if fit is not None else EXIT_FAIL


def _list(args, stdout: TextIO) -> int:
    specs = [IdentityOut.from_spec(spec) for spec in get_registry()]
    if args.format == "json":
        stdout.write(dump_json([spec.model_dump() for spec in specs]))
        return EXIT_OK
    for spec in specs:
        params = ", ".join(f"{name}={lo}..{hi}" for name, (lo, hi) in spec.params.items())
        stdout.write(f"{spec.id:<16} {params:<24} {spec.description}\n")
    return EXIT_OK


COMMANDS = {"verify": _verify, "expand": _expand, "fit": _fit, "list": _list}


def run(argv: list[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logger.debug("Running %s with max_order=%s", args.command, get_settings().max_order)
    try:
        return COMMANDS[args.command](args, stdout)
    except QForgeError as exc:
        stderr.write(f"qforge: {exc}\n")
        return EXIT_USAGE
