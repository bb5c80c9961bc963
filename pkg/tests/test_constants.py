import math

import pytest
from hypothesis import given, strategies as st

from dexcheck.constants import ProvenanceTag, load_defaults, lookup, override
from dexcheck.dimension import LENGTH, TEMPERATURE, Dimension, Quantity
from dexcheck.errors import DimensionMismatch, UnknownConstant


def test_required_defaults_present(reg):
    expected = {
        "c": 2.99792458e10, "hbar": 1.054572e-27, "G": 6.674e-8, "e": 4.80320e-10,
        "m_e": 9.10938e-28, "m_p": 1.67262e-24, "m_pi": 2.48807e-25, "m_mu": 1.88353e-25,
        "k": 1.380649e-16, "N": 1e80, "M": 1e56, "T": 1e17, "T_bg": 2.0, "H_obs": 2.27e-18,
    }
    for name, value in expected.items():
        assert reg[name].magnitude == value, name


def test_provenance_tags(reg):
    for name in ("N", "M", "T", "T_bg"):
        const = lookup(reg, name)
        assert const.provenance.tag is ProvenanceTag.PAPER_ASSERTED
        assert const.provenance.citation
    for name in ("c", "hbar", "G", "e", "m_e", "k", "H_obs"):
        assert lookup(reg, name).provenance.tag is ProvenanceTag.MEASURED_EXTERNAL
    for name in ("l", "R"):
        assert lookup(reg, name).provenance.tag is ProvenanceTag.DERIVED


def test_lookup_examples(reg):
    assert reg["N"].dimension.is_dimensionless
    assert reg["hbar"].dimension == Dimension(1, 2, -1, 0)
    # desk values: hbar/(m_pi c) and sqrt(N) * l
    assert reg["l"].magnitude == pytest.approx(1.4138162e-13, rel=1e-7)
    assert reg["R"].magnitude == pytest.approx(1.4138162e27, rel=1e-7)
    gm = (reg["G"] * reg["M"] / reg["c"] ** 2).magnitude
    assert abs(math.log10(gm / reg["R"].magnitude)) == pytest.approx(0.72, abs=0.005)
    with pytest.raises(UnknownConstant) as info:
        lookup(reg, "nope")
    assert info.value.name == "nope"


def test_defaults_deterministic():
    a, b = load_defaults(), load_defaults()
    assert a == b
    assert list(a) == list(b)
    assert a.to_json() == b.to_json()


def test_override(reg):
    warm = override(reg, "T_bg", Quantity(2.725, TEMPERATURE))
    assert warm["T_bg"].magnitude == 2.725
    assert lookup(warm, "T_bg").provenance.citation == "user override"
    assert reg["T_bg"].magnitude == 2.0
    with pytest.raises(DimensionMismatch):
        override(reg, "T_bg", Quantity(2.725, LENGTH))
    with pytest.raises(UnknownConstant):
        override(reg, "zeta", Quantity(1.0))


def test_override_rederives_dependents(reg):
    bigger = override(reg, "N", Quantity(4e80))
    assert bigger["R"].magnitude == pytest.approx(2 * reg["R"].magnitude, rel=1e-15)
    pinned = override(reg, "R", Quantity(1e28, LENGTH))
    assert override(pinned, "N", Quantity(4e80))["R"].magnitude == 1e28


names = st.sampled_from(list(load_defaults()))
dims = st.sampled_from([Dimension(1, 0, 0, 0), LENGTH, TEMPERATURE, Dimension(0, 0, 0, 0),
                        Dimension(-1, 3, -2, 0)])


@given(names, dims, st.floats(1e-50, 1e50))
def test_override_never_changes_dimension(name, dim, magnitude):
    reg = load_defaults()
    before = reg[name].dimension
    try:
        updated = override(reg, name, Quantity(magnitude, dim))
    except DimensionMismatch:
        assert dim != before
    else:
        assert dim == before
        assert all(updated[n].dimension == reg[n].dimension for n in reg)


def test_exports(reg):
    rows = reg.to_json()
    assert rows[0] == {
        "name": "c", "symbol": "c", "value": 2.99792458e10,
        "dimension_exponents": ["0", "1", "-1", "0"],
        "provenance": {"tag": "measured-external", "citation": "exact by definition"},
    }
    from dexcheck.dsl import parse

    cat = parse(reg.to_dsl())
    assert [c.name for c in cat.constants] == list(reg)
    assert all(c.value == reg[c.name] for c in cat.constants)
