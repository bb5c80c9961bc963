"""Command-line entry point.

Exit codes: 0 success (DISCREPANT results are findings, not failures),
1 dimension error or engine failure, 2 usage or catalog parse error,
3 DISCREPANT results under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import cosmology
from .catalog import builtin_catalog, procedure_checks
from .constants import Registry, load_defaults
from .dimension import CHARGE, LENGTH, MASS, Dimension, Quantity, format_quantity
from .dsl import Diagnostic, ParseError, infer_dimension, parse, parse_expr, parse_quantity, unresolved
from .engine import Status, evaluate, run_catalog
from .errors import DexCheckError, InvalidGrid, InvalidN
from .expr import CatalogFile
from .procedures import HorizonKind, kerr_newman_horizon

EXIT_OK, EXIT_DIM_ERROR, EXIT_USAGE, EXIT_STRICT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    catalog_path: Optional[Path] = None
    format: str = "table"
    tol_scale: float = 1.0
    overrides: list[tuple[str, Quantity]] = field(default_factory=list)


def _parse_override(text: str) -> tuple[str, Quantity]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise UsageError(f"--set expects name=value unit, got {text!r}")
    try:
        return name.strip(), parse_quantity(value.strip())
    except ParseError as exc:
        raise UsageError(f"--set {name.strip()}: {exc}") from None


def _registry(overrides) -> Registry:
    reg = load_defaults()
    for name, value in overrides:
        try:
            reg = reg.override(name, value)
        except DexCheckError as exc:
            raise UsageError(f"--set {name}: {exc}") from None
    return reg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", dest="overrides", action="append", nargs="+", default=[],
                        metavar="NAME=VALUE", help="override a registry constant, e.g. --set T_bg=2.725 K")
    common.add_argument("--format", choices=("json", "table", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="dexcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="run the relation catalog")
    check.add_argument("--catalog", type=Path, help="extra .rel catalog file")
    check.add_argument("--no-builtin", action="store_true", help="check only --catalog relations")
    check.add_argument("--no-procedures", action="store_true", help="skip the procedure-based checks")
    check.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
    check.add_argument("--strict", action="store_true", help="exit 3 when any result is DISCREPANT")

    ev = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    ev.add_argument("expr")

    cosmo = sub.add_parser("cosmo", parents=[common], help="cosmological state from N")
    group = cosmo.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=float, help="single particle number")
    group.add_argument("--sweep", nargs=3, metavar=("N_START", "N_END", "POINTS"))

    horizon = sub.add_parser("horizon", parents=[common], help="classify a Kerr-Newman horizon")
    horizon.add_argument("--mass", required=True, help="e.g. '9.10938e-28 g' or 'm_e'")
    horizon.add_argument("--charge", default="0 esu")
    horizon.add_argument("--spin-length", default="0 cm")

    consts = sub.add_parser("constants", parents=[common], help="list the constant registry")
    consts.add_argument("--dsl", action="store_true", help="emit const lines for a .rel file")
    return parser


def _emit(text: str, stream=None):
    stream = stream or sys.stdout
    stream.write(text if text.endswith("\n") else text + "\n")


def _render_diags(diags: Sequence[Diagnostic], filename: str):
    for d in diags:
        print(d.render(filename), file=sys.stderr)


def _load_catalog(args, reg: Registry) -> CatalogFile:
    builtin = CatalogFile() if args.no_builtin else builtin_catalog()
    if args.catalog is None:
        return builtin
    filename = str(args.catalog)
    try:
        text = args.catalog.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {filename}: {exc.strerror}") from None
    try:
        extra = parse(text)
    except ParseError as exc:
        _render_diags(exc.diagnostics, filename)
        raise UsageError(f"{filename}: {len(exc.diagnostics)} error(s)") from None
    diags = unresolved(CatalogFile(builtin.constants + extra.constants, extra.relations), reg)
    taken = {r.id for r in builtin.relations}
    diags += [Diagnostic("DuplicateId", f"relation id {r.id!r} already in the builtin catalog", r.span)
              for r in extra.relations if r.id in taken and r.span is not None]
    if diags:
        _render_diags(diags, filename)
        raise UsageError(f"{filename}: {len(diags)} error(s)")
    return CatalogFile(builtin.constants + extra.constants, builtin.relations + extra.relations)


def cmd_check(args, config: CliConfig) -> int:
    reg = _registry(config.overrides)
    if not config.tol_scale > 0:
        raise UsageError("--tol-scale must be positive")
    cat = _load_catalog(args, reg)
    procedures = [] if (args.no_procedures or args.no_builtin) else procedure_checks(reg)
    report = run_catalog(cat, reg, config.tol_scale, procedures)
    if config.format == "json":
        _emit(json.dumps(report.to_json(), indent=2, ensure_ascii=False))
    elif config.format == "csv":
        _emit(report.to_csv())
    else:
        _emit(report.to_table())
    dim_errors = [r for r in report.results + report.procedures if r.status is Status.DIM_ERROR]
    for r in dim_errors:
        print(f"DIM_ERROR {r.relation_id}: {r.detail}", file=sys.stderr)
    if dim_errors:
        return EXIT_DIM_ERROR
    if args.strict and any(r.status is Status.DISCREPANT for r in report.results + report.procedures):
        return EXIT_STRICT
    return EXIT_OK


def cmd_eval(args, config: CliConfig) -> int:
    reg = _registry(config.overrides)
    try:
        node = parse_expr(args.expr)
    except ParseError as exc:
        _render_diags(exc.diagnostics, "<expr>")
        return EXIT_USAGE
    try:
        infer_dimension(node, reg)
        value = evaluate(node, reg)
    except DexCheckError as exc:
        span = getattr(exc, "span", None)
        where = f"<expr>:{span}: " if span is not None else ""
        print(f"{where}{exc}", file=sys.stderr)
        return EXIT_DIM_ERROR
    if config.format == "json":
        _emit(json.dumps({
            "expr": args.expr,
            "magnitude": value.magnitude,
            "unit": value.dimension.unit_string(),
            "dimension_exponents": [str(x) for x in value.dimension.exponents],
        }))
    else:
        _emit(format_quantity(value))
    return EXIT_OK


def cmd_cosmo(args, config: CliConfig) -> int:
    reg = _registry(config.overrides)
    try:
        if args.n is not None:
            series = cosmology.SweepSeries((cosmology.cosmo_state(args.n, reg),), args.n, args.n, 1)
            fits = []
        else:
            try:
                start, end, points = float(args.sweep[0]), float(args.sweep[1]), int(args.sweep[2])
            except ValueError:
                raise UsageError("--sweep expects N_START N_END POINTS") from None
            series = cosmology.sweep(start, end, points, reg)
            fits = cosmology.scaling_fits(series)
    except (InvalidN, InvalidGrid) as exc:
        raise UsageError(str(exc)) from None

    fmt = config.format or "csv"
    if fmt == "json":
        _emit(json.dumps({
            "columns": list(cosmology.CSV_HEADER),
            "states": [s.row() for s in series.states],
            "rho_convention": cosmology.RHO_CONVENTION,
            "slopes": [{"x": f.x, "y": f.y, "slope": f.slope, "expected": exp,
                        "max_residual": f.max_residual} for f, exp in fits],
        }, indent=2))
        return EXIT_OK
    if fmt == "csv":
        _emit(cosmology.to_csv(series))
        summary_stream = sys.stderr
    else:
        rows = [cosmology.CSV_HEADER] + [tuple(repr(v) for v in s.row()) for s in series.states]
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        _emit("\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows))
        summary_stream = sys.stdout
    for f, expected in fits:
        print(f"slope {f.y} vs {f.x}: {f.slope!r} (expected {expected!r}, max residual {f.max_residual!r})",
              file=summary_stream)
    return EXIT_OK


def _horizon_arg(text: str, expected: Dimension, reg: Registry, flag: str) -> Quantity:
    try:
        value = parse_quantity(text)
    except ParseError:
        try:
            value = evaluate(parse_expr(text), reg)
        except (ParseError, DexCheckError) as exc:
            raise UsageError(f"{flag}: cannot read {text!r}: {exc}") from None
    if value.dimension.is_dimensionless and expected != value.dimension:
        value = Quantity(value.magnitude, expected)
    if value.dimension != expected:
        raise UsageError(f"{flag} needs dimension {expected}, got {value.dimension}")
    return value


def cmd_horizon(args, config: CliConfig) -> int:
    reg = _registry(config.overrides)
    mass = _horizon_arg(args.mass, MASS, reg, "--mass")
    charge = _horizon_arg(args.charge, CHARGE, reg, "--charge")
    spin = _horizon_arg(args.spin_length, LENGTH, reg, "--spin-length")
    try:
        result = kerr_newman_horizon(mass, charge, spin, reg)
    except DexCheckError as exc:
        raise UsageError(str(exc)) from None
    fields = {
        "kind": result.kind.value,
        "real": result.horizon.real.magnitude,
        "imag": result.horizon.imag.magnitude,
        "radicand": result.radicand.magnitude,
        "compton_ratio": result.compton_ratio,
        "outer_horizon": None if result.outer_horizon is None else result.outer_horizon.magnitude,
        "unit": "cm",
    }
    if config.format == "json":
        _emit(json.dumps(fields, indent=2))
    elif config.format == "csv":
        _emit(",".join(fields) + "\n" + ",".join("" if v is None else str(v) for v in fields.values()))
    else:
        lines = [f"kind           {result.kind.value}",
                 f"horizon        {result.horizon.real.magnitude!r} + i {result.horizon.imag.magnitude!r} cm"]
        if result.kind is HorizonKind.QMBH:
            lines.append(f"compton ratio  {result.compton_ratio!r}")
        else:
            lines.append(f"outer horizon  {format_quantity(result.outer_horizon)}")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_constants(args, config: CliConfig) -> int:
    reg = _registry(config.overrides)
    if args.dsl:
        _emit(reg.to_dsl())
    elif config.format == "json":
        _emit(json.dumps(reg.to_json(), indent=2, ensure_ascii=False))
    elif config.format == "csv":
        lines = ["name,symbol,value,unit,provenance,citation"]
        for c in reg.constants():
            citation = c.provenance.citation.replace('"', '""')
            lines.append(f'{c.name},{c.symbol},{c.value.magnitude!r},{c.value.dimension.unit_string()},'
                         f'{c.provenance.tag.value},"{citation}"')
        _emit("\n".join(lines))
    else:
        rows = [(c.name, f"{c.value.magnitude!r} {c.value.dimension.unit_string()}",
                 c.provenance.tag.value, c.provenance.citation) for c in reg.constants()]
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        _emit("\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)) + "  " + r[3] for r in rows))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "eval": cmd_eval,
    "cosmo": cmd_cosmo,
    "horizon": cmd_horizon,
    "constants": cmd_constants,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = CliConfig(
            command=args.command,
            catalog_path=getattr(args, "catalog", None),
            format=args.format or ("table" if args.command != "cosmo" else None),
            tol_scale=getattr(args, "tol_scale", 1.0),
            overrides=[_parse_override(" ".join(parts)) for parts in args.overrides],
        )
        return COMMANDS[args.command](args, config)
    except UsageError as exc:
        print(f"dexcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(run_cli(argv))
