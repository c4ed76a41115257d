"""Physical constants and conversions to Hartree atomic units.

All kernels in the package work in atomic units (hbar = m_e = e = 1).
Laboratory units (eV, Mb, nm, angstrom) are converted at the boundary.
Values are CODATA 2018 and frozen here; nothing is looked up at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from .errors import ConfigurationError, DomainError

# CODATA 2018
C_AU = 137.035999084  # speed of light, atomic units (1/alpha)
HARTREE_EV = 27.211386245988
BOHR_NM = 0.0529177210903

BOHR_CM = BOHR_NM * 1e-7
MB_CM2 = 1e-18
# 1 Mb in bohr^2, derived (not hard-coded) so it tracks BOHR_NM
MB_AU = MB_CM2 / BOHR_CM**2
ANGSTROM_NM = 0.1


@dataclass(frozen=True)
class Constants:
    c_au: float = C_AU
    bohr_in_nm: float = BOHR_NM
    hartree_in_eV: float = HARTREE_EV

    @property
    def mb_in_au_area(self) -> float:
        return MB_CM2 / (self.bohr_in_nm * 1e-7) ** 2


CONSTANTS = Constants()

# unit tag -> factor to multiply by to get atomic units
_ENERGY_UNITS = {"hartree": 1.0, "eV": 1.0 / HARTREE_EV}
_AREA_UNITS = {"au": 1.0, "Mb": MB_AU}
_LENGTH_UNITS = {"bohr": 1.0, "nm": 1.0 / BOHR_NM, "angstrom": ANGSTROM_NM / BOHR_NM}

_ALIASES = {
    "ev": "eV",
    "Ha": "hartree",
    "Eh": "hartree",
    "mb": "Mb",
    "a.u.": "au",
    "bohr2": "au",
    "bohr^2": "au",
    "atomic-unit-of-area": "au",
    "a0": "bohr",
    "Angstrom": "angstrom",
    "A": "angstrom",
}


def _canonical(unit: str, table: dict) -> str:
    unit = _ALIASES.get(unit, unit)
    if unit not in table:
        raise ConfigurationError(f"unknown unit tag {unit!r}; expected one of {sorted(table)}")
    return unit


def convert(value, from_unit: str, to_unit: str, kind: str):
    """Convert a scalar or array between two units of the same kind.

    ``kind`` is one of ``"energy"``, ``"area"``, ``"length"``.
    """
    table = _TABLES.get(kind)
    if table is None:
        raise ConfigurationError(f"unknown quantity kind {kind!r}")
    f_from = table[_canonical(from_unit, table)]
    f_to = table[_canonical(to_unit, table)]
    if f_from == f_to:
        return value * 1.0
    return value * f_from / f_to


_TABLES = {"energy": _ENERGY_UNITS, "area": _AREA_UNITS, "length": _LENGTH_UNITS}


def ev_to_hartree(x):
    return np.asarray(x, dtype=float) / HARTREE_EV if np.ndim(x) else float(x) / HARTREE_EV


def hartree_to_ev(x):
    return np.asarray(x, dtype=float) * HARTREE_EV if np.ndim(x) else float(x) * HARTREE_EV


def mb_to_au(x):
    return np.asarray(x, dtype=float) * MB_AU if np.ndim(x) else float(x) * MB_AU


def au_to_mb(x):
    return np.asarray(x, dtype=float) / MB_AU if np.ndim(x) else float(x) / MB_AU


class _Quantity:
    kind: ClassVar[str]
    atomic_unit: ClassVar[str]
    value: float
    unit: str

    def __post_init__(self):
        table = _TABLES[self.kind]
        object.__setattr__(self, "unit", _canonical(self.unit, table))
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise DomainError(f"{self.kind} must be finite, got {self.value}")
        self._check()

    def _check(self):
        pass

    @property
    def au(self) -> float:
        """Magnitude in atomic units."""
        return convert(self.value, self.unit, self.atomic_unit, self.kind)

    def to(self, unit: str):
        return type(self)(convert(self.value, self.unit, unit, self.kind), unit)

    def to_atomic(self):
        return self.to(self.atomic_unit)


@dataclass(frozen=True)
class Energy(_Quantity):
    value: float
    unit: str = "eV"
    kind: ClassVar[str] = "energy"
    atomic_unit: ClassVar[str] = "hartree"


@dataclass(frozen=True)
class Area(_Quantity):
    value: float
    unit: str = "Mb"
    kind: ClassVar[str] = "area"
    atomic_unit: ClassVar[str] = "au"

    def _check(self):
        if self.value < 0:
            raise DomainError(f"area must be non-negative, got {self.value} {self.unit}")


@dataclass(frozen=True)
class Length(_Quantity):
    value: float
    unit: str = "nm"
    kind: ClassVar[str] = "length"
    atomic_unit: ClassVar[str] = "bohr"

    def _check(self):
        if self.value <= 0:
            raise DomainError(f"length must be positive, got {self.value} {self.unit}")


Quantity = Union[Energy, Area, Length]


def to_atomic(q: Quantity) -> Quantity:
    if not isinstance(q, _Quantity):
        raise ConfigurationError(f"expected Energy, Area or Length, got {type(q).__name__}")
    return q.to_atomic()


def as_hartree(e) -> float:
    """Energy object -> hartree; bare numbers are taken to be hartree already."""
    return e.au if isinstance(e, Energy) else float(e)


def as_bohr(r) -> float:
    return r.au if isinstance(r, Length) else float(r)


def as_au_area(s) -> float:
    return s.au if isinstance(s, Area) else float(s)


def electron_wavenumber(eps) -> float:
    """k = sqrt(2 eps) for a free electron, atomic units."""
    e = as_hartree(eps)
    if not e >= 0:
        raise DomainError(f"electron energy must be >= 0, got {e} hartree")
    return math.sqrt(2.0 * e)


def photon_wavenumber(energy) -> float:
    """k_ph = E / c in atomic units."""
    e = as_hartree(energy)
    if not e > 0:
        raise DomainError(f"photon energy must be > 0, got {e} hartree")
    return e / C_AU
