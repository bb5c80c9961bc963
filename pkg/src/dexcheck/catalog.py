"""Builtin relation catalog plus the procedure-based checks that accompany it."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .constants import Registry, load_defaults
from .dimension import ENERGY, LENGTH, MASS, Quantity
from .dsl import parse
from .engine import CheckResult, Status, compare
from .expr import CatalogFile
from . import procedures as proc

# relative tolerance 1e-6 expressed in dex
_PPM_DEX = math.log10(1 + 1e-6)

NEUTRINO_BAND = (-9.5, -7.5)
WEAK_NEUTRINO_MASS_FRACTION = 1e-8
WEAK_RADIUS_CM = 1e28


def builtin_text() -> str:
    return resources.files(__package__).joinpath("builtin.rel").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def builtin_catalog() -> CatalogFile:
    return parse(builtin_text())


def weak_sector(reg: Registry) -> proc.WeakSector:
    """Weak-sector chain at the upper neutrino mass bound 1e-8 m_e and R = 1e28 cm."""
    m_nu = WEAK_NEUTRINO_MASS_FRACTION * reg["m_e"]
    R = Quantity(WEAK_RADIUS_CM, LENGTH)
    return proc.weak_couplings(m_nu, proc.neutrino_count(m_nu, R, reg), R, reg)


def _exact(rel_id: str, ok: bool, ref: str, detail: str) -> CheckResult:
    return CheckResult(rel_id, Status.PASS if ok else Status.DISCREPANT, paper_ref=ref, detail=detail)


def procedure_checks(reg: Registry | None = None) -> list[CheckResult]:
    """Checks that need a procedure rather than one expression, in a fixed order."""
    reg = reg if reg is not None else load_defaults()
    out = []

    m_e, c, hbar = reg["m_e"], reg["c"], reg["hbar"]
    electron = proc.kerr_newman_horizon(m_e, reg["e"], hbar / (2 * m_e * c), reg)
    compton = hbar / (2 * m_e * c)
    res = compare("kn_electron", electron.horizon.imag, compton, _PPM_DEX, "Eq. (1)",
                  f"{electron.kind.value}; imaginary part vs hbar/(2 m_e c)")
    if electron.kind is not proc.HorizonKind.QMBH:
        res = CheckResult(res.relation_id, Status.DISCREPANT, res.lhs_value, res.rhs_value,
                          res.gap_dex, res.tol_dex, res.paper_ref, "horizon is not complex")
    out.append(res)

    rest = m_e * c ** 2
    out.append(compare("zpf_electron", proc.zpf_energy(hbar / (m_e * c), reg), rest, _PPM_DEX,
                       "Eq. (4)", "hbar c / lambda at the electron Compton wavelength vs m_e c^2"))

    spectrum = proc.composite_spectrum(reg)
    out.append(compare("pion_mass", spectrum.pion_mass_pred, reg["m_pi"], 0.5, "Sec. 3",
                       f"orbit radius e^2/(m_e c^2) = {spectrum.pion_radius}"))
    out.append(compare("muon_mass", spectrum.muon_mass_pred, reg["m_mu"], 0.2, "Sec. 3",
                       "muon Compton wavelength 3/2 of the pion's"))

    m_nu = proc.neutrino_mass(reg["T_bg"], reg)
    lo, hi = NEUTRINO_BAND
    centre = Quantity(10.0 ** ((lo + hi) / 2) * m_e.magnitude, MASS)
    ratio = math.log10(m_nu.magnitude / m_e.magnitude)
    out.append(compare("eq11_band", m_nu, centre, (hi - lo) / 2, "Eq. (12)",
                       f"log10(m_nu/m_e) = {ratio!r}; band [{lo}, {hi}] widened 0.5 dex"
                       " from the stated [-9, -8]"))

    weak = weak_sector(reg)
    out.append(compare("nu_count", Quantity(weak.N_nu), Quantity(1e90), 1.5, "Sec. 4",
                       "gravity vs Fermi energy balance at m_nu = 1e-8 m_e, R = 1e28 cm"))
    out.append(compare("eq13_energy", weak.m_nu * c ** 2, Quantity(1e-14, ENERGY), 1.0, "Eq. (13)",
                       "m_nu c^2 at the upper mass bound"))
    out.append(compare("g2L2", weak.g2L2, Quantity(1e-59, ENERGY), 1.0, "Eq. (13)",
                       "g^2 L^2 = m_nu c^2 / sqrt(N_nu)"))

    balance = proc.gaussian_balance(Quantity(hbar.magnitude / (m_e.magnitude * c.magnitude), LENGTH))
    out.append(compare("gaussian_balance", Quantity(balance), Quantity(1.0), 1.0, "Sec. 5 item 4",
                       "integral to the Compton cutoff vs the tail beyond it"))

    for d in (1, 2):
        q = proc.quark_charge(d, reg)
        out.append(_exact(f"quark_charge_{d}", q.magnitude == reg["e"].magnitude * float(Fraction(d, 3)),
                          "Sec. 5 item 6", f"({d}/3) e = {q}"))

    for particle, observed in proc.OBSERVED_CHARGE.items():
        got = proc.net_charge([particle])
        parts = "+".join(proc.constituents(particle))
        out.append(_exact(f"charge_{particle}", got == observed, "Sec. 3",
                          f"{particle} = {{{parts}}}: net {got:+d} e, observed {observed:+d} e"))
    for parent, products in proc.DECAYS.items():
        before, after = proc.net_charge([parent]), proc.net_charge(products)
        out.append(_exact(f"decay_{parent}", before == after, "Sec. 3",
                          f"{parent} -> {' '.join(products)}: charge {before:+d} -> {after:+d}"))
    return out
