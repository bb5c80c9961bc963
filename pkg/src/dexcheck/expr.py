"""Expression trees, relations and catalog files.

Source spans ride along on every node but are excluded from equality, so
two trees parsed from differently formatted text compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .constants import Constant


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1

    def __str__(self):
        return f"{self.line}:{self.column}"


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Number:
    value: float
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Ident:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * /
    lhs: "Expr"
    rhs: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Call:
    fn: str  # sqrt | exp | log10
    arg: "Expr"
    span: Optional[SourceSpan] = _span()


Expr = Union[Number, Ident, Binary, Pow, Call]

FUNCTIONS = ("sqrt", "exp", "log10")


@dataclass(frozen=True)
class Equality:
    tol_dex: float

    def __post_init__(self):
        if not self.tol_dex > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol_dex!r}")


@dataclass(frozen=True)
class Asserted:
    note: str


@dataclass(frozen=True)
class Relation:
    id: str
    lhs: Optional[Expr]
    rhs: Optional[Expr]
    mode: Union[Equality, Asserted]
    paper_ref: str = ""
    comparator: str = "~"
    span: Optional[SourceSpan] = _span()

    @property
    def is_asserted(self) -> bool:
        return isinstance(self.mode, Asserted)

    @property
    def tol_dex(self) -> Optional[float]:
        return None if self.is_asserted else self.mode.tol_dex


@dataclass(frozen=True)
class CatalogFile:
    constants: tuple[Constant, ...] = ()
    relations: tuple[Relation, ...] = ()
