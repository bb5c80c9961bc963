"""Evaluate expressions, check relations in dex space and build reports."""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .constants import Registry
from .dimension import Quantity, dex_gap, qty_arith, qty_pow
from .dsl import format_catalog, infer_dimension
from .errors import (
    DexCheckError,
    DimensionMismatch,
    NonDimensionlessArg,
    NonPositive,
    Overflow,
    UnknownIdent,
)
from .expr import Binary, Call, CatalogFile, Expr, Ident, Number, Pow, Relation


class Status(str, enum.Enum):
    PASS = "PASS"
    DISCREPANT = "DISCREPANT"
    ASSERTED = "ASSERTED"
    DIM_ERROR = "DIM_ERROR"


def evaluate(node: Expr, reg: Mapping[str, Quantity]) -> Quantity:
    if isinstance(node, Number):
        return Quantity(node.value)
    if isinstance(node, Ident):
        if node.name not in reg:
            raise UnknownIdent(node.name, node.span)
        return reg[node.name]
    if isinstance(node, Pow):
        return qty_pow(evaluate(node.base, reg), node.exponent)
    if isinstance(node, Call):
        arg = evaluate(node.arg, reg)
        if node.fn == "sqrt":
            return qty_pow(arg, Fraction(1, 2))
        if not arg.dimension.is_dimensionless:
            raise NonDimensionlessArg(f"{node.fn}() needs a dimensionless argument, got {arg.dimension}",
                                      node.span)
        if node.fn == "exp":
            try:
                return Quantity(math.exp(arg.magnitude))
            except OverflowError:
                raise Overflow(f"exp({arg.magnitude!r}) overflows") from None
        if arg.magnitude <= 0:
            raise NonPositive(f"log10 of non-positive value {arg.magnitude!r}")
        return Quantity(math.log10(arg.magnitude))
    lhs = evaluate(node.lhs, reg)
    rhs = evaluate(node.rhs, reg)
    op = {"+": "add", "-": "sub", "*": "mul", "/": "div"}[node.op]
    try:
        return qty_arith(lhs, rhs, op)
    except DimensionMismatch as exc:
        raise DimensionMismatch(str(exc), exc.left, exc.right, node.span) from None


@dataclass(frozen=True)
class CheckResult:
    relation_id: str
    status: Status
    lhs_value: Optional[Quantity] = None
    rhs_value: Optional[Quantity] = None
    gap_dex: Optional[float] = None
    tol_dex: Optional[float] = None
    paper_ref: str = ""
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.relation_id,
            "paper_ref": self.paper_ref,
            "lhs": _quantity_json(self.lhs_value),
            "rhs": _quantity_json(self.rhs_value),
            "gap_dex": self.gap_dex,
            "tol_dex": self.tol_dex,
            "status": self.status.value,
            "detail": self.detail,
        }


def _quantity_json(q: Optional[Quantity]):
    if q is None:
        return None
    return {"magnitude": q.magnitude, "unit": q.dimension.unit_string()}


def _where(exc) -> str:
    span = getattr(exc, "span", None)
    return f" at {span}" if span is not None else ""


def compare(relation_id: str, lhs: Quantity, rhs: Quantity, tol_dex: float,
            paper_ref: str = "", detail: str = "") -> CheckResult:
    """Classify two already-evaluated quantities; shared by catalog and procedure checks."""
    if lhs.dimension != rhs.dimension:
        return CheckResult(relation_id, Status.DIM_ERROR, lhs, rhs, None, tol_dex, paper_ref,
                           f"lhs dimension {lhs.dimension} != rhs dimension {rhs.dimension}")
    try:
        gap = dex_gap(lhs, rhs)
    except NonPositive as exc:
        return CheckResult(relation_id, Status.DISCREPANT, lhs, rhs, None, tol_dex, paper_ref, str(exc))
    status = Status.PASS if gap <= tol_dex else Status.DISCREPANT
    return CheckResult(relation_id, status, lhs, rhs, gap, tol_dex, paper_ref, detail)


def check_relation(rel: Relation, reg: Mapping[str, Quantity], tol_scale: float = 1.0) -> CheckResult:
    if rel.is_asserted:
        return CheckResult(rel.id, Status.ASSERTED, paper_ref=rel.paper_ref, detail=rel.mode.note)
    tol = rel.mode.tol_dex * tol_scale
    try:
        lhs_dim = infer_dimension(rel.lhs, reg)
        rhs_dim = infer_dimension(rel.rhs, reg)
    except (DimensionMismatch, NonDimensionlessArg, UnknownIdent) as exc:
        return CheckResult(rel.id, Status.DIM_ERROR, tol_dex=tol, paper_ref=rel.paper_ref,
                           detail=f"{exc}{_where(exc)}")
    if lhs_dim != rhs_dim:
        return CheckResult(rel.id, Status.DIM_ERROR, tol_dex=tol, paper_ref=rel.paper_ref,
                           detail=f"lhs dimension {lhs_dim} != rhs dimension {rhs_dim}")
    try:
        lhs = evaluate(rel.lhs, reg)
        rhs = evaluate(rel.rhs, reg)
    except DexCheckError as exc:
        return CheckResult(rel.id, Status.DISCREPANT, tol_dex=tol, paper_ref=rel.paper_ref,
                           detail=f"evaluation failed: {exc}{_where(exc)}")
    return compare(rel.id, lhs, rhs, tol, rel.paper_ref)


def catalog_hash(cat: CatalogFile) -> str:
    return hashlib.sha256(format_catalog(cat).encode("utf-8")).hexdigest()


@dataclass
class Report:
    results: list[CheckResult]
    registry: Registry
    catalog_hash: str
    tol_scale: float = 1.0
    procedures: list[CheckResult] = field(default_factory=list)

    @property
    def summary(self) -> dict[str, int]:
        return _summary(self.results)

    def count(self, status: Status) -> int:
        return sum(r.status is status for r in self.results)

    def to_json(self) -> dict:
        out = {
            "catalog_hash": self.catalog_hash,
            "tol_scale": self.tol_scale,
            "summary": self.summary,
            "results": [r.to_json() for r in self.results],
            "registry": self.registry.to_json(),
        }
        if self.procedures:
            out["procedures"] = [r.to_json() for r in self.procedures]
            out["procedure_summary"] = _summary(self.procedures)
        return out

    def to_table(self) -> str:
        text = _table(self.results)
        text += "\nsummary: " + ", ".join(f"{k}={v}" for k, v in self.summary.items()) + "\n"
        if self.procedures:
            text += "\nprocedures:\n" + _table(self.procedures)
        return text

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["section", "id", "status", "gap_dex", "tol_dex", "paper_ref", "detail"])
        for section, rows in (("catalog", self.results), ("procedure", self.procedures)):
            for r in rows:
                writer.writerow([section, r.relation_id, r.status.value, _fmt(r.gap_dex),
                                 _fmt(r.tol_dex), r.paper_ref, r.detail])
        return buf.getvalue()


def _summary(results: Sequence[CheckResult]) -> dict[str, int]:
    return {s.value.lower(): sum(r.status is s for r in results) for s in Status}


def _fmt(x: Optional[float]) -> str:
    return "-" if x is None else repr(x)


def _table(results: Sequence[CheckResult]) -> str:
    rows = [("id", "status", "gap", "tol", "ref")]
    rows += [(r.relation_id, r.status.value, _fmt(r.gap_dex), _fmt(r.tol_dex), r.paper_ref)
             for r in results]
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = []
    for row in rows:
        cells = [cell.ljust(w) for cell, w in zip(row, widths)] + [row[4]]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def run_catalog(cat: CatalogFile, reg: Registry, tol_scale: float = 1.0,
                procedures: Sequence[CheckResult] = ()) -> Report:
    """Check every relation of ``cat`` in order against ``reg`` extended by the file's constants."""
    if not tol_scale > 0:
        raise ValueError("tol_scale must be positive")
    try:
        effective = reg.with_constants(cat.constants)
    except DimensionMismatch as exc:
        results = [
            CheckResult(r.id, Status.ASSERTED if r.is_asserted else Status.DIM_ERROR,
                        paper_ref=r.paper_ref, detail=r.mode.note if r.is_asserted else str(exc))
            for r in cat.relations
        ]
        return Report(results, reg, catalog_hash(cat), tol_scale, list(procedures))
    results = [check_relation(rel, effective, tol_scale) for rel in cat.relations]
    return Report(results, effective, catalog_hash(cat), tol_scale, list(procedures))


REPORT_SCHEMA = {
    "type": "object",
    "required": ["catalog_hash", "summary", "results"],
    "properties": {
        "catalog_hash": {"type": "string"},
        "summary": {
            "type": "object",
            "required": ["pass", "discrepant", "asserted", "dim_error"],
            "properties": {k: {"type": "integer", "minimum": 0}
                           for k in ("pass", "discrepant", "asserted", "dim_error")},
        },
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "paper_ref", "lhs", "rhs", "gap_dex", "tol_dex", "status", "detail"],
                "properties": {
                    "id": {"type": "string"},
                    "paper_ref": {"type": "string"},
                    "lhs": {"type": ["object", "null"]},
                    "rhs": {"type": ["object", "null"]},
                    "gap_dex": {"type": ["number", "null"]},
                    "tol_dex": {"type": ["number", "null"]},
                    "status": {"enum": [s.value for s in Status]},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}
