"""Computations that are procedures rather than single catalog expressions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from scipy import integrate

from .dimension import (
    CHARGE,
    DIMENSIONLESS,
    ENERGY,
    LENGTH,
    MASS,
    TEMPERATURE,
    Dimension,
    Quantity,
    dex_gap,
)
from .errors import (
    DimensionMismatch,
    InvalidDimensionCount,
    InvalidInput,
    NonPositiveLength,
    NonPositiveMass,
    NonPositiveTemperature,
)

Registry = Mapping[str, Quantity]


def _require(q: Quantity, dim: Dimension, what: str):
    if q.dimension != dim:
        raise DimensionMismatch(f"{what} must have dimension {dim}, got {q.dimension}", dim, q.dimension)


def _default_registry(reg):
    if reg is None:
        from .constants import load_defaults

        reg = load_defaults()
    return reg


# Kerr-Newman horizon

class HorizonKind(str, enum.Enum):
    CLASSICAL = "ClassicalBlackHole"
    QMBH = "QuantumMechanicalBlackHole"


@dataclass(frozen=True)
class ComplexLength:
    real: Quantity
    imag: Quantity


@dataclass(frozen=True)
class HorizonClassification:
    horizon: ComplexLength
    kind: HorizonKind
    compton_ratio: Optional[float]
    radicand: Quantity
    outer_horizon: Optional[Quantity] = None

    @property
    def detail(self) -> str:
        if self.kind is HorizonKind.CLASSICAL:
            return f"real outer horizon {self.outer_horizon}"
        return f"imaginary part {self.horizon.imag}, compton ratio {self.compton_ratio!r}"


def kerr_newman_horizon(mass: Quantity, charge: Quantity, spin_length: Quantity,
                        reg: Optional[Registry] = None) -> HorizonClassification:
    """Horizon r+ = GM/c^2 + i b with b^2 = G Q^2/c^4 + a^2 - (GM/c^2)^2.

    A positive radicand gives a complex horizon (quantum-mechanical black
    hole) whose imaginary part is compared with hbar/(2 M c).  Otherwise
    the hole is classical and the outer real horizon is recorded.
    """
    reg = _default_registry(reg)
    _require(mass, MASS, "mass")
    _require(charge, CHARGE, "charge")
    _require(spin_length, LENGTH, "spin length")
    if mass.magnitude <= 0:
        raise NonPositiveMass(f"mass must be positive, got {mass}")
    if charge.magnitude < 0 or spin_length.magnitude < 0:
        raise InvalidInput("charge and spin length must be non-negative")
    G, c, hbar = reg["G"], reg["c"], reg["hbar"]

    gravitational = G * mass / c ** 2
    charge_term = G * charge ** 2 / c ** 4
    radicand = charge_term + spin_length ** 2 - gravitational ** 2
    if radicand.magnitude > 0:
        imag = radicand ** Fraction(1, 2)
        compton = hbar / (2 * mass * c)
        return HorizonClassification(
            ComplexLength(gravitational, imag), HorizonKind.QMBH,
            imag.magnitude / compton.magnitude, radicand,
        )
    outer = gravitational + Quantity(-radicand.magnitude, radicand.dimension) ** Fraction(1, 2)
    return HorizonClassification(
        ComplexLength(gravitational, Quantity(0.0, LENGTH)), HorizonKind.CLASSICAL,
        None, radicand, outer,
    )


def zpf_energy(wavelength: Quantity, reg: Optional[Registry] = None) -> Quantity:
    """Zero-point fluctuation energy hbar c / lambda held in a region of size lambda."""
    reg = _default_registry(reg)
    _require(wavelength, LENGTH, "wavelength")
    if wavelength.magnitude <= 0:
        raise NonPositiveLength(f"wavelength must be positive, got {wavelength}")
    hbar, c = reg["hbar"], reg["c"]
    dim = hbar.dimension * c.dimension / wavelength.dimension
    # exact rational product and quotient, rounded once
    exact = Fraction(hbar.magnitude) * Fraction(c.magnitude) / Fraction(wavelength.magnitude)
    return Quantity(float(exact), dim)


# composite particles

@dataclass(frozen=True)
class CompositeSpectrum:
    pion_radius: Quantity
    pion_mass_pred: Quantity
    muon_mass_pred: Quantity
    gaps: dict


def composite_spectrum(reg: Optional[Registry] = None) -> CompositeSpectrum:
    """Electron-neutrino bound state: electrostatic/centrifugal balance fixes
    the orbit at e^2/(m_e c^2), read as the pion Compton wavelength.  The
    muon wavelength is taken as 3/2 of the pion's, i.e. mass 2/3 m_pi."""
    reg = _default_registry(reg)
    e, m_e, c, hbar = reg["e"], reg["m_e"], reg["c"], reg["hbar"]
    radius = e ** 2 / (m_e * c ** 2)
    pion = hbar / (radius * c)
    muon = Quantity(2.0 / 3.0 * reg["m_pi"].magnitude, MASS)
    gaps = {"pion": dex_gap(pion, reg["m_pi"]), "muon": dex_gap(muon, reg["m_mu"])}
    return CompositeSpectrum(radius, pion, muon, gaps)


PARTICLE_CHARGE = {"e-": -1, "e+": 1, "nu": 0, "nubar": 0, "gamma": 0}

# constituent content of the composites
COMPOSITES = {
    "pi+": ("e+", "nu"),
    "pi-": ("e-", "nu"),
    "pi0": ("e+", "e-"),
    "mu-": ("pi-", "nu"),
    "mu+": ("pi+", "nu"),
    "p": ("e+", "e-", "e+"),
}

OBSERVED_CHARGE = {"pi+": 1, "pi-": -1, "pi0": 0, "mu-": -1, "mu+": 1, "p": 1}

DECAYS = {
    "pi+": ("mu+", "nu"),
    "pi-": ("mu-", "nubar"),
    "pi0": ("gamma", "gamma"),
    "mu-": ("e-", "nubar", "nu"),
    "mu+": ("e+", "nu", "nubar"),
}


def constituents(particle: str) -> list[str]:
    """Flatten a particle into elementary leptons (electrons, positrons, neutrinos)."""
    if particle in PARTICLE_CHARGE:
        return [particle]
    return [leaf for part in COMPOSITES[particle] for leaf in constituents(part)]


def net_charge(particles) -> int:
    """Net charge in units of e."""
    return sum(PARTICLE_CHARGE[leaf] for p in particles for leaf in constituents(p))


def quark_charge(d: int, reg: Optional[Registry] = None) -> Quantity:
    """Charge seen when only ``d`` of the three diagonal stresses contribute: (d/3) e."""
    if d not in (1, 2, 3):
        raise InvalidDimensionCount(f"dimension count must be 1, 2 or 3, got {d!r}")
    e = _default_registry(reg)["e"]
    return Quantity(e.magnitude * float(Fraction(d, 3)), CHARGE)


# neutrino / weak sector

@dataclass(frozen=True)
class WeakSector:
    m_nu: Quantity
    N_nu: float
    g2L2: Quantity
    gbar2_over_e2: float


def neutrino_mass(T_bg: Quantity, reg: Optional[Registry] = None) -> Quantity:
    """Bose-statistics neutrino mass m = sqrt(3) k T / c^2."""
    reg = _default_registry(reg)
    _require(T_bg, TEMPERATURE, "temperature")
    if T_bg.magnitude <= 0:
        raise NonPositiveTemperature(f"temperature must be positive, got {T_bg}")
    return math.sqrt(3.0) * reg["k"] * T_bg / reg["c"] ** 2


def _log10(q: Quantity) -> float:
    return math.log10(q.magnitude)


def neutrino_count_log10(m_nu: Quantity, R: Quantity, reg: Optional[Registry] = None) -> float:
    """log10 of N from G N m^2/R = N^(2/3) hbar^2/(m R^2), i.e. N^(1/3) = hbar^2/(G m^3 R)."""
    reg = _default_registry(reg)
    _require(m_nu, MASS, "neutrino mass")
    _require(R, LENGTH, "radius")
    if m_nu.magnitude <= 0:
        raise NonPositiveMass(f"neutrino mass must be positive, got {m_nu}")
    if R.magnitude <= 0:
        raise NonPositiveLength(f"radius must be positive, got {R}")
    hbar, G = reg["hbar"], reg["G"]
    dim = hbar.dimension ** 2 / (G.dimension * m_nu.dimension ** 3 * R.dimension)
    if dim != DIMENSIONLESS:
        raise DimensionMismatch(f"neutrino count is not dimensionless: {dim}", DIMENSIONLESS, dim)
    # summed logs: G m^3 for m ~ 1e-35 g sits near 1e-113, kept away from the subnormal floor
    return 3.0 * (2.0 * _log10(hbar) - _log10(G) - 3.0 * _log10(m_nu) - _log10(R))


def neutrino_count(m_nu: Quantity, R: Quantity, reg: Optional[Registry] = None) -> float:
    return 10.0 ** neutrino_count_log10(m_nu, R, reg)


def weak_couplings(m_nu: Quantity, N_nu: float, R: Quantity,
                   reg: Optional[Registry] = None) -> WeakSector:
    """Short-range product g^2 L^2 = m c^2 / sqrt(N) and long-range
    gbar^2/e^2 = (1e-8 m c^2 R / sqrt(N)) / e^2, both in log space."""
    reg = _default_registry(reg)
    _require(m_nu, MASS, "neutrino mass")
    _require(R, LENGTH, "radius")
    if not (m_nu.magnitude > 0 and N_nu > 0 and R.magnitude > 0):
        raise InvalidInput("weak couplings need positive m_nu, N_nu and R")
    c, e = reg["c"], reg["e"]
    if m_nu.magnitude >= reg["m_e"].magnitude:
        raise InvalidInput("neutrino mass must be below the electron mass")
    rest_energy_log = _log10(m_nu) + 2.0 * _log10(c)
    g2L2_log = rest_energy_log - 0.5 * math.log10(N_nu)
    ratio_dim = ENERGY * R.dimension / e.dimension ** 2
    if ratio_dim != DIMENSIONLESS:
        raise DimensionMismatch(f"gbar^2/e^2 is not dimensionless: {ratio_dim}", DIMENSIONLESS, ratio_dim)
    gbar_log = -8.0 + g2L2_log + _log10(R) - 2.0 * _log10(e)
    return WeakSector(m_nu, N_nu, Quantity(10.0 ** g2L2_log, ENERGY), 10.0 ** gbar_log)


# Gaussian cutoff balance

def gaussian_balance(mu_inv: Quantity) -> float:
    """Ratio of the Gaussian exp(-mu^2 x^2) integrated up to 1/mu over the
    tail from 1/mu to infinity, by adaptive quadrature."""
    _require(mu_inv, LENGTH, "cutoff length")
    if mu_inv.magnitude <= 0:
        raise NonPositiveLength(f"cutoff length must be positive, got {mu_inv}")
    cutoff = mu_inv.magnitude

    def density(x):
        return math.exp(-((x / cutoff) ** 2))

    opts = dict(epsabs=0.0, epsrel=1e-12, limit=200)
    inner, _ = integrate.quad(density, 0.0, cutoff, **opts)
    near, _ = integrate.quad(density, cutoff, 8.0 * cutoff, **opts)
    far, _ = integrate.quad(density, 8.0 * cutoff, math.inf, **opts)
    return inner / (near + far)
