"""Asymptotic ICEC cross section and multi-neighbor sums.

For a capture center A and a neighbor B at distance R::

    sigma_ICEC(eps) = P(E_vph, R) * sigma_PR^A(eps)
    P = 3 c^4 sigma_PI^B(eps') / (2 pi R^6 E_vph^4)          (atomic units)

with E_vph = EA_A + eps and eps' = E_vph - IP_B.  Several neighbors add
incoherently.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import units
from .detailed_balance import pr_from_pi_au
from .errors import ChannelClosedError, DataValidationError, DomainError, ScanError
from .units import C_AU, Energy, Length
from .xs_tables import SpeciesRecord, sigma_at

log = logging.getLogger(__name__)

P_PREFACTOR = 3.0 / (2.0 * math.pi)
# warn when R is below this multiple of the summed nominal radii
VALIDITY_RADIUS_FACTOR = 3.0


class AsymptoticRangeWarning(UserWarning):
    """Neighbor distance short enough that the R^-6 asymptotics is suspect."""


def icec_threshold(ea, ip) -> Energy:
    a, b = units.as_hartree(ea), units.as_hartree(ip)
    if not (a > 0 and b > 0):
        raise DomainError("EA and IP must both be positive")
    return Energy(max(0.0, b - a), "hartree")


def outgoing_energy(ea, eps, ip) -> Energy:
    a, e, b = units.as_hartree(ea), units.as_hartree(eps), units.as_hartree(ip)
    eprime = a + e - b
    if eprime < 0:
        if eprime > -1e-14 * max(a, b):
            eprime = 0.0
        else:
            raise ChannelClosedError(
                f"eps = {units.hartree_to_ev(e):.9g} eV is below the ICEC threshold "
                f"{units.hartree_to_ev(b - a):.9g} eV"
            )
    return Energy(eprime, "hartree")


def p_coefficient_au(sigma_pi, e_vph, r):
    """Dimensionless P; all arguments in atomic units, vectorised."""
    e_vph = np.asarray(e_vph, dtype=float)
    if np.any(e_vph <= 0):
        raise DomainError("virtual photon energy must be > 0")
    if np.any(np.asarray(r) <= 0):
        raise DomainError("distance must be > 0")
    return P_PREFACTOR * C_AU**4 * np.asarray(sigma_pi, dtype=float) / (np.asarray(r, dtype=float) ** 6 * e_vph**4)


def p_coefficient(sigma_pi_b, e_vph, r) -> float:
    s = units.as_au_area(sigma_pi_b)
    if s < 0:
        raise DomainError("cross section must be >= 0")
    return float(p_coefficient_au(s, units.as_hartree(e_vph), units.as_bohr(r)))


@dataclass(frozen=True, eq=False)
class Neighbor:
    species: SpeciesRecord
    distance: Length
    count: int = 1

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"neighbor count must be a positive integer, got {self.count!r}")

    @property
    def r(self) -> float:
        return self.distance.au


@dataclass(frozen=True)
class ScanOptions:
    spin_coefficient: float = 1.0
    wigner_extension: bool = False


@dataclass(frozen=True, eq=False)
class Scenario:
    capture_species: SpeciesRecord
    neighbors: tuple[Neighbor, ...]
    energy_grid: np.ndarray  # hartree
    options: ScanOptions = field(default_factory=ScanOptions)

    def __post_init__(self):
        object.__setattr__(self, "neighbors", tuple(self.neighbors))
        grid = np.array([units.as_hartree(e) for e in np.atleast_1d(self.energy_grid)], dtype=float)
        grid.setflags(write=False)
        object.__setattr__(self, "energy_grid", grid)
        if not self.neighbors:
            raise DomainError("a scenario needs at least one neighbor")
        if grid.size and (np.any(grid <= 0) or np.any(np.diff(grid) <= 0)):
            raise DomainError("energy grid must be positive and strictly increasing")

    def check_validity(self) -> list[str]:
        """Warn for neighbors inside the nominal short-range zone."""
        msgs = []
        ra = self.capture_species.radius
        for i, nb in enumerate(self.neighbors):
            rb = nb.species.radius
            if ra is None or rb is None:
                continue
            limit = VALIDITY_RADIUS_FACTOR * (ra + rb)
            if nb.r < limit:
                msg = (
                    f"neighbor {i} ({nb.species.name}) at R = {units.convert(nb.r, 'bohr', 'angstrom', 'length'):.4g} A"
                    f" is inside {VALIDITY_RADIUS_FACTOR:g}x the summed nominal radii"
                    f" ({units.convert(limit, 'bohr', 'angstrom', 'length'):.4g} A);"
                    " the asymptotic formula may be inaccurate"
                )
                warnings.warn(msg, AsymptoticRangeWarning, stacklevel=2)
                msgs.append(msg)
        return msgs


@dataclass(frozen=True)
class NeighborEntry:
    """Per-neighbor quantities at one incident energy (atomic units).

    ``sigma`` is the contribution of a single neighbor of this kind; the
    block contributes ``count * sigma`` to the total.
    """

    eprime: float
    e_vph: float
    p: float
    sigma: float
    open: bool
    count: int = 1

    @property
    def block_sigma(self) -> float:
        return self.count * self.sigma


@dataclass(frozen=True)
class IcecResultRow:
    eps: float
    sigma_pr: float
    neighbors: tuple[NeighborEntry, ...]
    sigma_total: float

    @property
    def eps_eV(self) -> float:
        return units.hartree_to_ev(self.eps)


def _entry(capture: SpeciesRecord, nb: Neighbor, eps: float, sigma_pr: float, opts: ScanOptions) -> NeighborEntry:
    ea, ip = capture.ea, nb.species.ea
    e_vph = ea + eps
    if eps < icec_threshold(ea, ip).au:
        return NeighborEntry(eprime=0.0, e_vph=e_vph, p=0.0, sigma=0.0, open=False, count=nb.count)
    eprime = outgoing_energy(ea, eps, ip).au
    s_pi = float(sigma_at(nb.species.curve, eprime, opts.wigner_extension))
    p = float(p_coefficient_au(s_pi, e_vph, nb.r))
    sigma = opts.spin_coefficient**2 * p * sigma_pr
    return NeighborEntry(eprime=eprime, e_vph=e_vph, p=p, sigma=sigma, open=True, count=nb.count)


def sigma_icec_single(capture: SpeciesRecord, neighbor: Neighbor, eps, options: ScanOptions | None = None) -> NeighborEntry:
    """ICEC contribution of one neighbor at incident energy ``eps``.

    Closed channels give ``open=False`` and zero cross section.
    """
    opts = options or ScanOptions()
    e = units.as_hartree(eps)
    if not e > 0:
        raise DomainError("incident electron energy must be > 0")
    sigma_pr = float(pr_from_pi_au(capture, e, opts.wigner_extension))
    return _entry(capture, neighbor, e, sigma_pr, opts)


def sigma_icec_multi(scenario: Scenario, eps) -> IcecResultRow:
    opts = scenario.options
    e = units.as_hartree(eps)
    if not e > 0:
        raise DomainError("incident electron energy must be > 0")
    sigma_pr = float(pr_from_pi_au(scenario.capture_species, e, opts.wigner_extension))
    entries = []
    for i, nb in enumerate(scenario.neighbors):
        try:
            entries.append(_entry(scenario.capture_species, nb, e, sigma_pr, opts))
        except DataValidationError as exc:
            raise ScanError(
                f"neighbor {i} ({nb.species.name}) at eps = {units.hartree_to_ev(e):.9g} eV: {exc}",
                eps=e,
                neighbor_index=i,
            ) from exc
    total = 0.0
    for en in entries:
        total += en.count * en.sigma
    return IcecResultRow(eps=e, sigma_pr=sigma_pr, neighbors=tuple(entries), sigma_total=total)


def scan(scenario: Scenario) -> list[IcecResultRow]:
    """One row per grid energy, in grid order.

    Closed channels are zeros; the first data error aborts the scan with a
    :class:`ScanError` naming the energy.
    """
    rows = []
    for e in scenario.energy_grid:
        try:
            rows.append(sigma_icec_multi(scenario, float(e)))
        except ScanError:
            raise
        except DataValidationError as exc:
            raise ScanError(
                f"capture species {scenario.capture_species.name} at eps = {units.hartree_to_ev(e):.9g} eV: {exc}",
                eps=float(e),
            ) from exc
    log.debug("scanned %d energies over %d neighbor blocks", len(rows), len(scenario.neighbors))
    return rows


# -- serialisation ----------------------------------------------------------


def result_header(n_neighbors: int) -> list[str]:
    cols = ["eps_eV", "sigma_PR_Mb"]
    for i in range(n_neighbors):
        cols += [f"n{i}_eprime_eV", f"n{i}_E_vph_eV", f"n{i}_P", f"n{i}_sigma_Mb", f"n{i}_open"]
    cols.append("sigma_ICEC_total_Mb")
    return cols


def _f(x: float) -> str:
    return f"{x:.9g}"


def result_rows(rows: list[IcecResultRow]) -> list[list[str]]:
    """String cells, 9 significant figures; per-neighbor sigma is the block value."""
    out = []
    for row in rows:
        cells = [_f(units.hartree_to_ev(row.eps)), _f(units.au_to_mb(row.sigma_pr))]
        for en in row.neighbors:
            cells += [
                _f(units.hartree_to_ev(en.eprime)),
                _f(units.hartree_to_ev(en.e_vph)),
                _f(en.p),
                _f(units.au_to_mb(en.block_sigma)),
                "1" if en.open else "0",
            ]
        cells.append(_f(units.au_to_mb(row.sigma_total)))
        out.append(cells)
    return out


def format_results(rows: list[IcecResultRow], n_neighbors: int) -> str:
    lines = [",".join(result_header(n_neighbors))]
    lines += [",".join(c) for c in result_rows(rows)]
    return "\n".join(lines) + "\n"

