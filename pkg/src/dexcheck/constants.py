"""Named, provenance-tagged constants in Gaussian CGS."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Mapping

from .dimension import (
    CHARGE,
    DIMENSIONLESS,
    ENERGY,
    LENGTH,
    MASS,
    TEMPERATURE,
    TIME,
    Dimension,
    Quantity,
)
from .errors import DimensionMismatch, UnknownConstant


class ProvenanceTag(enum.Enum):
    MEASURED_EXTERNAL = "measured-external"
    PAPER_ASSERTED = "paper-asserted"
    DERIVED = "derived"


@dataclass(frozen=True)
class Provenance:
    tag: ProvenanceTag
    citation: str

    def __post_init__(self):
        if self.tag is not ProvenanceTag.MEASURED_EXTERNAL and not self.citation:
            raise ValueError(f"{self.tag.value} constants need a citation")


@dataclass(frozen=True)
class Constant:
    name: str
    symbol: str
    value: Quantity
    provenance: Provenance

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "symbol": self.symbol,
            "value": self.value.magnitude,
            "dimension_exponents": [str(x) for x in self.value.dimension.exponents],
            "provenance": {"tag": self.provenance.tag.value, "citation": self.provenance.citation},
        }


def _measured(name, symbol, magnitude, dim, citation="CODATA-class value"):
    return Constant(name, symbol, Quantity(magnitude, dim),
                    Provenance(ProvenanceTag.MEASURED_EXTERNAL, citation))


def _asserted(name, symbol, magnitude, dim, where):
    return Constant(name, symbol, Quantity(magnitude, dim),
                    Provenance(ProvenanceTag.PAPER_ASSERTED, where))


_PER_TIME = TIME ** -1
_ACTION = ENERGY * TIME
_GRAVITY = Dimension(-1, 3, -2, 0)

_BASE_DEFAULTS = (
    _measured("c", "c", 2.99792458e10, LENGTH / TIME, "exact by definition"),
    _measured("hbar", "ℏ", 1.054572e-27, _ACTION),
    _measured("G", "G", 6.674e-8, _GRAVITY),
    _measured("e", "e", 4.80320e-10, CHARGE),
    _measured("m_e", "m_e", 9.10938e-28, MASS),
    _measured("m_p", "m_p", 1.67262e-24, MASS),
    _measured("m_pi", "m_π", 2.48807e-25, MASS),
    _measured("m_mu", "m_μ", 1.88353e-25, MASS),
    _measured("k", "k", 1.380649e-16, ENERGY / TEMPERATURE, "exact by definition"),
    _asserted("N", "N", 1e80, DIMENSIONLESS, "Eq. (5): number of elementary particles ~ 1e80"),
    _asserted("M", "M", 1e56, MASS, "Eq. (5): mass of the universe 1e56 g"),
    _asserted("T", "T", 1e17, TIME, "after Eq. (6): age of the universe ~ 1e17 s"),
    _asserted("T_bg", "T_bg", 2.0, TEMPERATURE, "Sec. 4: background temperature about 2 K"),
)

# name -> (symbol, citation, recipe); recomputed after overrides of their inputs
_DERIVED: dict[str, tuple[str, str, Callable[["Registry"], Quantity]]] = {
    "l": ("l", "pion Compton wavelength hbar/(m_pi c)",
          lambda reg: reg["hbar"] / (reg["m_pi"] * reg["c"])),
    "R": ("R", "Eq. (9): R = sqrt(N) l",
          lambda reg: Quantity(math.sqrt(reg["N"].magnitude) * reg["l"].magnitude, LENGTH)),
}

_H_OBS = _measured("H_obs", "H_obs", 2.27e-18, _PER_TIME, "about 70 km/s/Mpc; comparison target chosen here")

DEFAULT_ORDER = tuple(c.name for c in _BASE_DEFAULTS) + tuple(_DERIVED) + ("H_obs",)


class Registry(Mapping[str, Quantity]):
    """Immutable ordered map of name -> Constant.

    Indexing (``reg["c"]``) returns the Quantity; :meth:`lookup` returns the
    full :class:`Constant` with its provenance.
    """

    def __init__(self, constants=(), overridden=frozenset()):
        self._constants: dict[str, Constant] = {}
        for const in constants:
            self._constants[const.name] = const
        self._overridden = frozenset(overridden)

    def lookup(self, name: str) -> Constant:
        try:
            return self._constants[name]
        except KeyError:
            raise UnknownConstant(name) from None

    def __getitem__(self, name: str) -> Quantity:
        return self.lookup(name).value

    def __iter__(self) -> Iterator[str]:
        return iter(self._constants)

    def __len__(self) -> int:
        return len(self._constants)

    def __contains__(self, name) -> bool:
        return name in self._constants

    def __eq__(self, other) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return list(self._constants.items()) == list(other._constants.items())

    def __hash__(self):
        return hash(tuple(self._constants.items()))

    def constants(self) -> list[Constant]:
        return list(self._constants.values())

    def override(self, name: str, value: Quantity) -> "Registry":
        return override(self, name, value)

    def with_constants(self, constants) -> "Registry":
        """Add or shadow constants (catalog-file definitions); dimensions must agree on shadowing."""
        items = dict(self._constants)
        for const in constants:
            existing = items.get(const.name)
            if existing is not None and existing.value.dimension != const.value.dimension:
                raise DimensionMismatch(
                    f"constant {const.name!r} redefined with dimension {const.value.dimension},"
                    f" registry has {existing.value.dimension}",
                    existing.value.dimension, const.value.dimension,
                )
            items[const.name] = const
        return Registry(items.values(), self._overridden | {c.name for c in constants})

    def _rederive(self) -> "Registry":
        reg = self
        for name, (symbol, citation, recipe) in _DERIVED.items():
            if name in reg._overridden or name not in reg._constants:
                continue
            const = Constant(name, symbol, recipe(reg), Provenance(ProvenanceTag.DERIVED, citation))
            reg = Registry([const if c.name == name else c for c in reg.constants()], reg._overridden)
        return reg

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self._constants.values()]

    def to_dsl(self) -> str:
        """Registry as ``const`` lines of the catalog language."""
        lines = []
        for c in self._constants.values():
            unit = c.value.dimension.unit_string()
            citation = c.provenance.citation.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'const {c.name} = {c.value.magnitude!r} {unit} prov "{citation}"')
        return "\n".join(lines) + "\n"


def load_defaults() -> Registry:
    reg = Registry(_BASE_DEFAULTS)
    for name, (symbol, citation, recipe) in _DERIVED.items():
        const = Constant(name, symbol, recipe(reg), Provenance(ProvenanceTag.DERIVED, citation))
        reg = Registry(reg.constants() + [const])
    return Registry(reg.constants() + [_H_OBS])


def lookup(reg: Registry, name: str) -> Constant:
    return reg.lookup(name)


def override(reg: Registry, name: str, value: Quantity) -> Registry:
    existing = reg.lookup(name)
    if existing.value.dimension != value.dimension:
        raise DimensionMismatch(
            f"override of {name!r} with {value.dimension}, expected {existing.value.dimension}",
            existing.value.dimension, value.dimension,
        )
    const = replace(existing, value=value,
                    provenance=Provenance(ProvenanceTag.DERIVED, "user override"))
    constants = [const if c.name == name else c for c in reg.constants()]
    return Registry(constants, reg._overridden | {name})._rederive()
