"""Cosmological state as a function of the particle number N, and power-law
checks over a geometric sweep in N."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .dimension import LENGTH, MASS, TIME, Dimension, Quantity
from .errors import DegenerateFit, InvalidGrid, InvalidN

DENSITY = MASS / LENGTH ** 3
GRAVITY = Dimension(-1, 3, -2, 0)

# rho omits the 4 pi / 3 sphere factor (0.62 dex, below the model's resolution)
RHO_CONVENTION = "M / R^3"

FIELDS = ("N", "R", "M", "T", "G_eff", "H", "Lambda", "rho")
CSV_HEADER = ("N", "R_cm", "M_g", "T_s", "G_cgs", "H_per_s", "Lambda_per_s2", "rho_g_per_cm3")


@dataclass(frozen=True)
class CosmoState:
    N: float
    R: Quantity
    M: Quantity
    T: Quantity
    G_eff: Quantity
    H: Quantity
    Lambda: Quantity
    rho: Quantity

    def value(self, name: str) -> float:
        field = getattr(self, name)
        return field if isinstance(field, float) else field.magnitude

    def row(self) -> list[float]:
        return [self.value(name) for name in FIELDS]


@dataclass(frozen=True)
class SweepSeries:
    states: tuple[CosmoState, ...]
    n_start: float
    n_end: float
    points: int

    def column(self, name: str) -> np.ndarray:
        return np.array([s.value(name) for s in self.states])


def cosmo_state(N: float, reg: Mapping[str, Quantity]) -> CosmoState:
    """Everything follows from N and the microphysical constants m_pi, hbar, c."""
    if not N >= 1:
        raise InvalidN(f"particle number must be >= 1, got {N!r}")
    m_pi, hbar, c, l = reg["m_pi"], reg["hbar"], reg["c"], reg["l"]
    root_n = math.sqrt(N)
    R = Quantity(root_n * l.magnitude, LENGTH)
    M = Quantity(N * m_pi.magnitude, MASS)
    T = root_n * hbar / (2 * m_pi * c ** 2)
    G_eff = l * c ** 2 / (m_pi * root_n)
    H = 1 / T
    Lambda = H ** 2
    rho = M / R ** 3
    return CosmoState(float(N), R, M, T, G_eff, H, Lambda, rho)


def sweep(n_start: float, n_end: float, points: int, reg: Mapping[str, Quantity]) -> SweepSeries:
    """Geometric grid in N, endpoints included."""
    if not (1 <= n_start < n_end) or points < 3:
        raise InvalidGrid(f"need 1 <= n_start < n_end and points >= 3, got {n_start}, {n_end}, {points}")
    lo, hi = math.log10(n_start), math.log10(n_end)
    grid = [10.0 ** (lo + (hi - lo) * i / (points - 1)) for i in range(points)]
    grid[0], grid[-1] = float(n_start), float(n_end)
    return SweepSeries(tuple(cosmo_state(n, reg) for n in grid), float(n_start), float(n_end), points)


@dataclass(frozen=True)
class PowerLawFit:
    x: str
    y: str
    slope: float
    intercept: float
    max_residual: float


def fit_powerlaw(series: SweepSeries, x: str, y: str) -> PowerLawFit:
    """Least-squares line through (log10 x, log10 y)."""
    for name in (x, y):
        if name not in FIELDS:
            raise KeyError(f"unknown field {name!r}; choose from {', '.join(FIELDS)}")
    xs, ys = series.column(x), series.column(y)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("power-law fit needs strictly positive values")
    lx, ly = np.log10(xs), np.log10(ys)
    if np.ptp(lx) == 0:
        raise DegenerateFit(f"all {x} values are equal")
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = float(np.max(np.abs(ly - (slope * lx + intercept))))
    return PowerLawFit(x, y, float(slope), float(intercept), residual)


SCALING_CLAIMS = (
    # (x, y, expected slope)
    ("T", "rho", -1.0),
    ("T", "Lambda", -2.0),
    ("T", "G_eff", -1.0),
)


def scaling_fits(series: SweepSeries) -> list[tuple[PowerLawFit, float]]:
    return [(fit_powerlaw(series, x, y), expected) for x, y, expected in SCALING_CLAIMS]


def closures(state: CosmoState, reg: Mapping[str, Quantity]) -> dict[str, float]:
    """Relative deviations of the in-model identities at one state (all ~0)."""
    m_pi, c, l = reg["m_pi"], reg["c"], reg["l"]
    G, M, R, H = state.G_eff, state.M, state.R, state.H
    schwarzschild = (G * M / (c ** 2 * R)).magnitude
    fluctuation = (G * m_pi / (l * c ** 2)).magnitude * math.sqrt(state.N)
    critical = (c ** 3 / (G * H)).magnitude / M.magnitude
    repulsion = (state.Lambda * R).magnitude / (H ** 2 * R).magnitude
    return {
        "GM/(c^2 R)": schwarzschild - 1.0,
        "G m_pi/(l c^2) * sqrt(N)": fluctuation - 1.0,
        "c^3/(G H M)": critical - 1.0,
        "Lambda R/(H^2 R)": repulsion - 1.0,
    }


def to_csv(series: SweepSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for state in series.states:
        writer.writerow([repr(v) for v in state.row()])
    return buf.getvalue()
