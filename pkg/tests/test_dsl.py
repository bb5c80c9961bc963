from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dexcheck.catalog import builtin_catalog, builtin_text
from dexcheck.dimension import DIMENSIONLESS, MASS, Dimension, Quantity
from dexcheck.dsl import (
    ParseError,
    format_catalog,
    format_expr,
    infer_dimension,
    parse,
    parse_expr,
    parse_quantity,
    parse_unit,
)
from dexcheck.engine import evaluate
from dexcheck.errors import DimensionMismatch, NonDimensionlessArg, UnknownIdent
from dexcheck.expr import Binary, Call, Equality, Ident, Number, Pow


def test_relation_tree():
    cat = parse('relation eq3: e^2 / (G * m_e^2) ~ 1e40 tol 3.0 dex ref "Eq. (3)"\n')
    (rel,) = cat.relations
    assert rel.id == "eq3"
    assert rel.lhs == Binary("/", Pow(Ident("e"), Fraction(2)),
                             Binary("*", Ident("G"), Pow(Ident("m_e"), Fraction(2))))
    assert rel.rhs == Number(1e40)
    assert rel.mode == Equality(3.0)
    assert rel.paper_ref == "Eq. (3)"


def test_const_def():
    (const,) = parse("const m_pi = 2.48807e-25 g").constants
    assert const.value == Quantity(2.48807e-25, MASS)


def test_units():
    assert parse_unit("erg") == Dimension(1, 2, -2, 0)
    assert parse_unit("esu") == Dimension(Fraction(1, 2), Fraction(3, 2), -1, 0)
    assert parse_unit("g^1/2 cm^3/2 s^-1") == parse_unit("esu")
    assert parse_unit("erg s") == Dimension(1, 2, -1, 0)
    assert parse_unit("") == DIMENSIONLESS
    assert parse_quantity("2.725 K").magnitude == 2.725


def test_dimension_mismatch_is_positioned(reg):
    (rel,) = parse("relation bad: c + m_e ~ 1 tol 1 dex").relations
    with pytest.raises(DimensionMismatch) as info:
        infer_dimension(rel.lhs, reg)
    assert (info.value.span.line, info.value.span.column) == (1, 17)


def test_infer_examples(reg):
    assert infer_dimension(parse_expr("G * m_pi^3 * c / hbar^2"), reg) == Dimension(0, 0, -1, 0)
    assert infer_dimension(parse_expr("sqrt(N)"), reg) == DIMENSIONLESS
    with pytest.raises(NonDimensionlessArg):
        infer_dimension(parse_expr("exp(c)"), reg)
    with pytest.raises(UnknownIdent):
        infer_dimension(parse_expr("zeta * c"), reg)


def test_exponent_forms():
    half = Pow(Ident("N"), Fraction(1, 2))
    assert parse_expr("N^1/2") == half
    assert parse_expr("N^(1/2)") == half
    assert parse_expr("N^(-1/2)") == Pow(Ident("N"), Fraction(-1, 2))
    assert parse_expr("N^-1") == Pow(Ident("N"), Fraction(-1))
    # '/' after an integer exponent is division when no integer follows
    assert parse_expr("e^2/(G)") == Binary("/", Pow(Ident("e"), Fraction(2)), Ident("G"))
    assert parse_expr("2 − 1") == Binary("-", Number(2.0), Number(1.0))


def test_format_normalizes_whitespace():
    assert format_expr(parse_expr("e ^2/( G*m_e^2 )")) == "e^2 / (G * m_e^2)"
    assert format_expr(parse_expr("a - (b - c)")) == "a - (b - c)"
    assert format_expr(parse_expr("(a * b) * c")) == "a * b * c"
    assert format_expr(parse_expr("(x^2)^3")) == "(x^2)^3"


def test_builtin_round_trip():
    cat = parse(builtin_text())
    assert parse(format_catalog(cat)) == cat
    assert format_catalog(parse(format_catalog(cat))) == format_catalog(cat)
    body = "".join(line for line in builtin_text().splitlines(True) if not line.startswith("#"))
    assert format_catalog(cat) == body.lstrip("\n")


def test_constants_survive_bit_exactly():
    (const,) = parse(format_catalog(parse("const m_pi = 2.48807e-25 g"))).constants
    assert const.value.magnitude == 2.48807e-25


@pytest.mark.parametrize("text, kind, line, col", [
    ("relation x: a ~ b tol 1", "SyntaxError", 1, 23),
    ("relation x: a ~ b tol 1 dex\nrelation x: a ~ b tol 1 dex", "DuplicateId", 2, 10),
    ("relation x: foo(a) ~ b tol 1 dex", "UnknownFunction", 1, 13),
    ("const q = 1 parsec", "SyntaxError", 1, 13),
    ("relation x: a ~ b tol 0 dex", "SyntaxError", 1, 23),
    ("\n\nbogus", "SyntaxError", 3, 1),
    ("relation x: a ^ (1/0) ~ b tol 1 dex", "SyntaxError", 1, 18),
])
def test_diagnostics(text, kind, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    diag = info.value.diagnostics[0]
    assert (diag.kind, diag.span.line, diag.span.column) == (kind, line, col)
    assert diag.render("f.rel").startswith(f"f.rel:{line}:{col}: ")


def test_recovers_and_reports_every_bad_line():
    text = "relation a: ~ tol 1 dex\nconst ok = 1 g\nrelation b: ( ~ 1 tol 1 dex\n"
    with pytest.raises(ParseError) as info:
        parse(text)
    assert [d.span.line for d in info.value.diagnostics] == [1, 3]


def test_forward_references_resolve(reg):
    from dexcheck.engine import run_catalog

    cat = parse("relation r: x ~ y tol 1 dex\nconst x = 2 g\nconst y = 3 g\n")
    report = run_catalog(cat, reg)
    assert report.results[0].status.value == "PASS"


def test_assert_statement():
    (rel,) = parse('assert g_weak: "g^2/m^2 ~ 1e43 g^-2" ref "item 6"').relations
    assert rel.is_asserted and rel.lhs is None and rel.rhs is None
    assert rel.mode.note == "g^2/m^2 ~ 1e43 g^-2"


def test_bytes_input_with_invalid_utf8():
    with pytest.raises(ParseError):
        parse(b"const x = 1 g \xff\n")


def _in_bounds(text, span):
    lines = text.split("\n")
    assert 1 <= span.line <= len(lines)
    assert span.length >= 1
    # newline character counts as the column after the last one
    assert 1 <= span.column and span.column + span.length - 1 <= len(lines[span.line - 1]) + 1


TOKENS = ["const", "relation", "assert", "tol", "dex", "ref", "prov", "x", "e", "G", "sqrt", "exp",
          "log10", "foo", "1", "2.5", "1e40", "(", ")", "^", "/", "*", "+", "-", "~", "=", ":",
          '"s"', '"', "g", "cm", "K", "\n", " ", "#", "$", "1/2", "-1"]


@settings(max_examples=300)
@given(st.lists(st.sampled_from(TOKENS), max_size=25))
def test_token_soup_never_crashes(parts):
    text = " ".join(parts)
    try:
        parse(text)
    except ParseError as exc:
        for d in exc.diagnostics:
            _in_bounds(text, d.span)


@settings(max_examples=200)
@given(st.binary(max_size=60))
def test_arbitrary_bytes_never_crash(data):
    try:
        parse(data)
    except ParseError:
        pass


# random well-typed expressions over the registry

LEAVES = ["c", "hbar", "G", "e", "m_e", "m_pi", "N", "T", "l", "R", "k", "T_bg"]


def expressions(depth=3):
    leaf = st.one_of(st.sampled_from(LEAVES).map(Ident), st.floats(0.5, 20).map(Number))
    return st.recursive(leaf, lambda sub: st.one_of(
        st.tuples(st.sampled_from("*/"), sub, sub).map(lambda t: Binary(*t)),
        st.tuples(sub, st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(-1), Fraction(1, 3)]))
        .map(lambda t: Pow(*t)),
        sub.map(lambda s: Call("sqrt", s)),
    ), max_leaves=6)


@settings(max_examples=200)
@given(expressions())
def test_inference_agrees_with_evaluation(node):
    from dexcheck.constants import load_defaults
    from dexcheck.errors import DexCheckError

    reg = load_defaults()
    dim = infer_dimension(node, reg)
    try:
        value = evaluate(node, reg)
    except DexCheckError:
        return
    assert value.dimension == dim


@settings(max_examples=200)
@given(expressions())
def test_expression_round_trip(node):
    assert parse_expr(format_expr(node)) == node


def test_builtin_catalog_shape():
    cat = builtin_catalog()
    assert sum(not r.is_asserted for r in cat.relations) == 13
    assert sum(r.is_asserted for r in cat.relations) == 3
