import csv
import io
import math

import pytest

from dexcheck.cosmology import (
    CSV_HEADER,
    closures,
    cosmo_state,
    fit_powerlaw,
    scaling_fits,
    sweep,
    to_csv,
)
from dexcheck.errors import DegenerateFit, InvalidGrid, InvalidN


def test_present_day_state(reg):
    s = cosmo_state(1e80, reg)
    # desk chain from the default constants
    assert s.R.magnitude == pytest.approx(1.4138162e27, rel=1e-7)
    assert s.M.magnitude == pytest.approx(2.48807e55, rel=1e-12)
    assert s.T.magnitude == pytest.approx(2.3579915e16, rel=1e-7)
    assert s.G_eff.magnitude == pytest.approx(5.1070693e-8, rel=1e-7)
    assert abs(math.log10(s.G_eff.magnitude / reg["G"].magnitude)) == pytest.approx(0.12, abs=0.005)
    assert s.R == reg["R"]


def test_single_particle_limit(reg):
    s = cosmo_state(1.0, reg)
    assert s.R == reg["l"]
    assert s.M == reg["m_pi"]
    assert s.T.magnitude == pytest.approx(2.3579915e-24, rel=1e-7)


def test_square_root_laws(reg):
    a, b = cosmo_state(1e80, reg), cosmo_state(4e80, reg)
    assert b.R.magnitude / a.R.magnitude == pytest.approx(2, rel=1e-15)
    assert b.T.magnitude / a.T.magnitude == pytest.approx(2, rel=1e-15)
    assert b.G_eff.magnitude / a.G_eff.magnitude == pytest.approx(0.5, rel=1e-15)


def test_invalid_inputs(reg):
    with pytest.raises(InvalidN):
        cosmo_state(0.5, reg)
    with pytest.raises(InvalidGrid):
        sweep(1e20, 1e10, 5, reg)
    with pytest.raises(InvalidGrid):
        sweep(1e20, 1e30, 2, reg)


def test_sweep_grid(reg):
    series = sweep(1e20, 1e120, 11, reg)
    ns = [s.N for s in series.states]
    assert len(ns) == 11 and ns[0] == 1e20 and ns[-1] == 1e120
    for a, b in zip(ns, ns[1:]):
        assert b / a == pytest.approx(1e10, rel=1e-12)
    for s in series.states:
        assert s.M.magnitude == s.N * reg["m_pi"].magnitude
        dev = closures(s, reg)
        for name in ("GM/(c^2 R)", "G m_pi/(l c^2) * sqrt(N)", "Lambda R/(H^2 R)"):
            assert abs(dev[name]) <= 1e-12, name
        # with H = 1/T and T = sqrt(N) hbar/(2 m_pi c^2), G H M = 2 c^3 identically
        assert dev["c^3/(G H M)"] == pytest.approx(-0.5, abs=1e-12)
    assert all(a.T.magnitude < b.T.magnitude for a, b in zip(series.states, series.states[1:]))


def test_slopes(reg):
    series = sweep(1e20, 1e120, 11, reg)
    for fit, expected in scaling_fits(series):
        assert fit.slope == pytest.approx(expected, abs=1e-9)
        assert fit.max_residual < 1e-9


def test_degenerate_fit(reg):
    series = sweep(1e20, 1e120, 5, reg)
    with pytest.raises(DegenerateFit):
        fit_powerlaw(type(series)((series.states[0],) * 3, 1e20, 1e20, 3), "T", "rho")


def test_csv_export(reg):
    series = sweep(1e20, 1e120, 4, reg)
    rows = list(csv.reader(io.StringIO(to_csv(series))))
    assert tuple(rows[0]) == CSV_HEADER == (
        "N", "R_cm", "M_g", "T_s", "G_cgs", "H_per_s", "Lambda_per_s2", "rho_g_per_cm3")
    assert [float(x) for x in rows[1]] == series.states[0].row()
