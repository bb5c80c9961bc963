"""Lexer, recursive-descent parser, formatter and dimension inference for
``.rel`` catalog files.

Grammar (newline-terminated statements, ``#`` comments)::

    const NAME = NUMBER unit* [prov "..."]
    relation ID: expr (~|=) expr tol NUMBER dex [ref "..."]
    assert ID: "note" ref "..."

    expr    := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := primary ("^" RATIONAL)?
    primary := NUMBER | IDENT | "(" expr ")" | (sqrt|exp|log10) "(" expr ")"

Parsing never raises anything but :class:`ParseError`, which carries every
positioned diagnostic found in the input.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .constants import Constant, Provenance, ProvenanceTag
from .dimension import DIMENSIONLESS, UNIT_DIMENSIONS, Dimension, Quantity
from .errors import DexCheckError, DimensionMismatch, NonDimensionlessArg, UnknownIdent
from .expr import (
    FUNCTIONS,
    Asserted,
    Binary,
    Call,
    CatalogFile,
    Equality,
    Expr,
    Ident,
    Number,
    Pow,
    Relation,
    SourceSpan,
)

KEYWORDS = frozenset({"const", "relation", "assert", "tol", "dex", "ref", "prov"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<op>[-+*/^():=~]|−)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # SyntaxError | DuplicateId | UnknownFunction | UnknownIdent | ...
    message: str
    span: SourceSpan

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.span.line}:{self.span.column}: {self.message}"


class ParseError(DexCheckError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{d.span}: {d.message}" for d in self.diagnostics))

    def render(self, filename: str = "<input>") -> str:
        return "\n".join(d.render(filename) for d in self.diagnostics)


@dataclass(frozen=True)
class Token:
    kind: str  # number ident string op newline eof
    text: str
    span: SourceSpan

    @property
    def is_int(self) -> bool:
        return self.kind == "number" and self.text.isdigit()


class _Abort(Exception):
    """Unwinds the current statement after a diagnostic has been recorded."""


def _tokenize(text: str, diags: list[Diagnostic]) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            diags.append(Diagnostic("SyntaxError", f"unexpected character {text[pos]!r}",
                                    SourceSpan(line, col, 1)))
            pos += 1
            continue
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "newline":
            tokens.append(Token("newline", lexeme, SourceSpan(line, col, 1)))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            if kind == "op" and lexeme == "−":
                lexeme = "-"
            tokens.append(Token(kind, lexeme, SourceSpan(line, col, len(m.group()))))
        pos = m.end()
    if text:
        # EOF diagnostics point at the final character so spans stay in bounds
        last = text.rfind("\n", 0, len(text) - 1)
        eof_span = SourceSpan(line - (1 if text.endswith("\n") else 0), len(text) - last - 1, 1)
    else:
        eof_span = SourceSpan(1, 1, 1)
    tokens.append(Token("eof", "", eof_span))
    return tokens


def _unescape(lexeme: str) -> str:
    return re.sub(r"\\(.)", r"\1", lexeme[1:-1])


def _escape(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Parser:
    def __init__(self, text: str):
        self.diags: list[Diagnostic] = []
        self.tokens = _tokenize(text, self.diags)
        self.pos = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def at_keyword(self, word: str) -> bool:
        return self.at("ident", word)

    def error(self, message: str, tok: Optional[Token] = None, kind: str = "SyntaxError"):
        tok = tok or self.tok
        self.diags.append(Diagnostic(kind, message, tok.span))
        raise _Abort

    def describe(self, tok: Token) -> str:
        if tok.kind == "eof":
            return "end of input"
        if tok.kind == "newline":
            return "end of line"
        return repr(tok.text)

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        self.error(f"expected {what or text or kind}, found {self.describe(self.tok)}")

    def expect_name(self, what: str) -> Token:
        if self.at("ident") and self.tok.text not in KEYWORDS:
            return self.advance()
        self.error(f"expected {what}, found {self.describe(self.tok)}")

    def end_statement(self):
        if not (self.at("newline") or self.at("eof")):
            self.error(f"expected end of line, found {self.describe(self.tok)}")
        self.advance()

    def skip_to_newline(self):
        while not (self.at("newline") or self.at("eof")):
            self.advance()
        self.advance()

    # numbers and rationals
    def number(self) -> float:
        tok = self.expect("number", what="a number")
        value = float(tok.text)
        if not math.isfinite(value):
            self.error(f"number {tok.text} is out of range", tok)
        return value

    def rational(self) -> Fraction:
        start = self.tok
        if self.at("op", "("):
            self.advance()
            value = self._signed_ratio(require_slash_int=False)
            self.expect("op", ")", "')'")
            return value
        return self._signed_ratio(require_slash_int=True, start=start)

    def _signed_int(self) -> int:
        sign = 1
        if self.at("op", "-"):
            self.advance()
            sign = -1
        if not self.tok.is_int:
            self.error(f"expected an integer exponent, found {self.describe(self.tok)}")
        return sign * int(self.advance().text)

    def _signed_ratio(self, require_slash_int: bool, start: Optional[Token] = None) -> Fraction:
        start = start or self.tok
        num = self._signed_int()
        den = 1
        if self.at("op", "/") and (not require_slash_int or self.peek().is_int):
            self.advance()
            den = self._signed_int()
        if den == 0:
            self.error("zero denominator in exponent", start)
        return Fraction(num, den)

    # expressions
    def expr(self) -> Expr:
        node = self.term()
        while self.at("op", "+") or self.at("op", "-"):
            op_tok = self.advance()
            node = Binary(op_tok.text, node, self.term(), op_tok.span)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("op", "*") or self.at("op", "/"):
            op_tok = self.advance()
            node = Binary(op_tok.text, node, self.factor(), op_tok.span)
        return node

    def factor(self) -> Expr:
        node = self.primary()
        if self.at("op", "^"):
            caret = self.advance()
            node = Pow(node, self.rational(), caret.span)
        return node

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            return Number(self.number(), tok.span)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect("op", ")", "')'")
            return node
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            if self.at("op", "("):
                if tok.text not in FUNCTIONS:
                    self.error(f"unknown function {tok.text!r}", tok, kind="UnknownFunction")
                self.advance()
                arg = self.expr()
                self.expect("op", ")", "')'")
                return Call(tok.text, arg, tok.span)
            if tok.text in FUNCTIONS:
                self.error(f"function {tok.text!r} needs an argument", tok)
            return Ident(tok.text, tok.span)
        self.error(f"expected an expression, found {self.describe(tok)}")

    # units
    def unit(self, stop=("newline", "eof")) -> Dimension:
        dim = DIMENSIONLESS
        while not any(self.at(k) for k in stop) and not self.at_keyword("prov"):
            tok = self.tok
            if tok.kind != "ident" or tok.text not in UNIT_DIMENSIONS:
                self.error(f"unknown unit {self.describe(tok)}")
            self.advance()
            exp = Fraction(1)
            if self.at("op", "^"):
                self.advance()
                exp = self.rational()
            dim = dim * UNIT_DIMENSIONS[tok.text] ** exp
        return dim

    # statements
    def catalog(self) -> CatalogFile:
        constants: list[Constant] = []
        relations: list[Relation] = []
        seen_consts: set[str] = set()
        seen_rels: set[str] = set()
        while not self.at("eof"):
            if self.at("newline"):
                self.advance()
                continue
            try:
                if self.at_keyword("const"):
                    name_tok, const = self.const_def()
                    if const.name in seen_consts:
                        self.diags.append(Diagnostic(
                            "DuplicateId", f"duplicate constant {const.name!r}", name_tok.span))
                    seen_consts.add(const.name)
                    constants.append(const)
                elif self.at_keyword("relation") or self.at_keyword("assert"):
                    id_tok, rel = self.relation_def()
                    if rel.id in seen_rels:
                        self.diags.append(Diagnostic(
                            "DuplicateId", f"duplicate relation id {rel.id!r}", id_tok.span))
                    seen_rels.add(rel.id)
                    relations.append(rel)
                else:
                    self.error(f"expected 'const', 'relation' or 'assert', found {self.describe(self.tok)}")
            except _Abort:
                self.skip_to_newline()
        return CatalogFile(tuple(constants), tuple(relations))

    def const_def(self):
        self.advance()
        name_tok = self.expect_name("a constant name")
        self.expect("op", "=", "'='")
        value = self.number()
        dim = self.unit()
        if self.at_keyword("prov"):
            self.advance()
            prov = Provenance(ProvenanceTag.PAPER_ASSERTED, _unescape(self.expect("string", what="a string").text))
        else:
            prov = Provenance(ProvenanceTag.DERIVED, "catalog file")
        self.end_statement()
        return name_tok, Constant(name_tok.text, name_tok.text, Quantity(value, dim), prov)

    def relation_def(self):
        keyword = self.advance()
        id_tok = self.expect_name("a relation id")
        self.expect("op", ":", "':'")
        if keyword.text == "assert":
            note = _unescape(self.expect("string", what="a string").text)
            if not self.at_keyword("ref"):
                self.error(f"expected 'ref', found {self.describe(self.tok)}")
            self.advance()
            ref = _unescape(self.expect("string", what="a string").text)
            self.end_statement()
            return id_tok, Relation(id_tok.text, None, None, Asserted(note), ref, "~", id_tok.span)
        lhs = self.expr()
        if not (self.at("op", "~") or self.at("op", "=")):
            self.error(f"expected '~' or '=', found {self.describe(self.tok)}")
        comparator = self.advance().text
        rhs = self.expr()
        if not self.at_keyword("tol"):
            self.error(f"expected 'tol', found {self.describe(self.tok)}")
        self.advance()
        tol_tok = self.tok
        tol = self.number()
        if tol <= 0:
            self.error("tolerance must be positive", tol_tok)
        if not self.at_keyword("dex"):
            self.error(f"expected 'dex', found {self.describe(self.tok)}")
        self.advance()
        ref = ""
        if self.at_keyword("ref"):
            self.advance()
            ref = _unescape(self.expect("string", what="a string").text)
        self.end_statement()
        return id_tok, Relation(id_tok.text, lhs, rhs, Equality(tol), ref, comparator, id_tok.span)


def _decode(text) -> str:
    if isinstance(text, (bytes, bytearray)):
        return bytes(text).decode("utf-8", errors="replace")
    return text


def parse(text) -> CatalogFile:
    """Parse catalog text (str or UTF-8 bytes) into a :class:`CatalogFile`."""
    p = _Parser(_decode(text))
    cat = p.catalog()
    if p.diags:
        raise ParseError(p.diags)
    return cat


def _parse_whole(text, rule) -> object:
    p = _Parser(_decode(text))
    try:
        result = rule(p)
        # tolerate a trailing newline
        while p.at("newline"):
            p.advance()
        if not p.at("eof"):
            p.error(f"unexpected {p.describe(p.tok)}")
    except _Abort:
        pass
    if p.diags:
        raise ParseError(p.diags)
    return result


def parse_expr(text) -> Expr:
    """Parse a single expression, as accepted on the right of a relation."""
    return _parse_whole(text, lambda p: p.expr())


def parse_unit(text) -> Dimension:
    """Parse a unit list like ``g cm^2 s^-2``; empty text is dimensionless."""
    return _parse_whole(text, lambda p: p.unit())


def parse_quantity(text) -> Quantity:
    """Parse ``NUMBER unit*`` such as ``2.725 K`` or ``1e28 cm``."""
    return _parse_whole(text, lambda p: Quantity(p.number(), p.unit()))


# formatting

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_number(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def format_exponent(r: Fraction) -> str:
    if r.denominator == 1 and r >= 0:
        return str(r.numerator)
    return f"({r})"


def _prec(node: Expr) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Pow):
        return 3
    return 4


def format_expr(node: Expr) -> str:
    if isinstance(node, Number):
        return format_number(node.value)
    if isinstance(node, Ident):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({format_expr(node.arg)})"
    if isinstance(node, Pow):
        base = format_expr(node.base)
        if _prec(node.base) < 4:
            base = f"({base})"
        return f"{base}^{format_exponent(node.exponent)}"
    prec = _PREC[node.op]
    lhs, rhs = format_expr(node.lhs), format_expr(node.rhs)
    if _prec(node.lhs) < prec:
        lhs = f"({lhs})"
    if _prec(node.rhs) <= prec:
        rhs = f"({rhs})"
    return f"{lhs} {node.op} {rhs}"


def format_relation(rel: Relation) -> str:
    if rel.is_asserted:
        return f"assert {rel.id}: {_escape(rel.mode.note)} ref {_escape(rel.paper_ref)}"
    line = (f"relation {rel.id}: {format_expr(rel.lhs)} {rel.comparator} {format_expr(rel.rhs)}"
            f" tol {format_number(rel.mode.tol_dex)} dex")
    if rel.paper_ref:
        line += f" ref {_escape(rel.paper_ref)}"
    return line


def format_constant(const: Constant) -> str:
    line = f"const {const.name} = {format_number(const.value.magnitude)}"
    if not const.value.dimension.is_dimensionless:
        line += f" {const.value.dimension.unit_string()}"
    if const.provenance.tag is ProvenanceTag.PAPER_ASSERTED:
        line += f" prov {_escape(const.provenance.citation)}"
    return line


def format_catalog(cat: CatalogFile) -> str:
    lines = [format_constant(c) for c in cat.constants]
    if cat.constants and cat.relations:
        lines.append("")
    lines.extend(format_relation(r) for r in cat.relations)
    return "\n".join(lines) + ("\n" if lines else "")


# dimension inference

def infer_dimension(node: Expr, reg: Mapping[str, Quantity]) -> Dimension:
    """Dimension of ``node`` given the quantities in ``reg``, without evaluating."""
    if isinstance(node, Number):
        return DIMENSIONLESS
    if isinstance(node, Ident):
        if node.name not in reg:
            raise UnknownIdent(node.name, node.span)
        return reg[node.name].dimension
    if isinstance(node, Pow):
        return infer_dimension(node.base, reg) ** node.exponent
    if isinstance(node, Call):
        arg = infer_dimension(node.arg, reg)
        if node.fn == "sqrt":
            return arg ** Fraction(1, 2)
        if not arg.is_dimensionless:
            raise NonDimensionlessArg(f"{node.fn}() needs a dimensionless argument, got {arg}", node.span)
        return DIMENSIONLESS
    lhs = infer_dimension(node.lhs, reg)
    rhs = infer_dimension(node.rhs, reg)
    if node.op in "+-":
        if lhs != rhs:
            raise DimensionMismatch(f"'{node.op}' between {lhs} and {rhs}", lhs, rhs, node.span)
        return lhs
    return lhs * rhs if node.op == "*" else lhs / rhs


def identifiers(node: Optional[Expr]):
    """Yield every Ident node in ``node`` (pre-order)."""
    if node is None:
        return
    if isinstance(node, Ident):
        yield node
    elif isinstance(node, Binary):
        yield from identifiers(node.lhs)
        yield from identifiers(node.rhs)
    elif isinstance(node, Pow):
        yield from identifiers(node.base)
    elif isinstance(node, Call):
        yield from identifiers(node.arg)


def unresolved(cat: CatalogFile, reg: Mapping[str, Quantity]) -> list[Diagnostic]:
    """Diagnostics for identifiers that neither the registry nor the file define."""
    known = set(reg) | {c.name for c in cat.constants}
    diags = []
    for rel in cat.relations:
        for side in (rel.lhs, rel.rhs):
            for ident in identifiers(side):
                if ident.name not in known:
                    diags.append(Diagnostic("UnknownIdent", f"unknown identifier {ident.name!r}",
                                            ident.span or SourceSpan(1, 1, 1)))
    return diags
