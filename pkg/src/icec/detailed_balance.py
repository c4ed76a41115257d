"""Photorecombination <-> photodetachment via detailed balance.

    k^2 g_A sigma_PR(eps) = k_ph^2 g_{A-} sigma_PI(eps)

with k = sqrt(2 eps) for the captured electron and k_ph = (EA + eps) / c for
the emitted photon (atomic units).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import units
from .errors import DomainError, SingularWavenumberError
from .units import C_AU, Area
from .xs_tables import CrossSectionCurve, SpeciesRecord, sigma_at


def pr_factor(binding_energy, eps, g_ratio=1.0):
    """(g_final / g_initial) * (k_ph / k)^2, vectorised over ``eps`` (hartree)."""
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < 0):
        raise DomainError("electron energy must be >= 0")
    if np.any(eps == 0):
        raise SingularWavenumberError("eps = 0: k -> 0 makes (k_ph/k)^2 diverge; use eps > 0")
    e_ph = binding_energy + eps
    return g_ratio * (e_ph / C_AU) ** 2 / (2.0 * eps)


def pr_from_pi_au(species: SpeciesRecord, eps, extend: bool = False):
    """Vectorised sigma_PR in bohr^2 for eps in hartree."""
    f = pr_factor(species.ea, eps, species.g_ratio)
    return f * sigma_at(species.curve, eps, extend)


def pr_from_pi(species: SpeciesRecord, eps, extend: bool = False) -> Area:
    e = units.as_hartree(eps)
    return Area(float(pr_from_pi_au(species, e, extend)), "au")


def pi_from_pr(species: SpeciesRecord, eps, sigma_pr) -> Area:
    """Inverse of :func:`pr_from_pi` for a given sigma_PR."""
    e = units.as_hartree(eps)
    s = units.as_au_area(sigma_pr)
    f = pr_factor(species.ea, e, species.g_ratio)
    return Area(float(s / f), "au")


@dataclass(frozen=True, eq=False)
class PrCurve:
    eps: np.ndarray  # hartree
    sigma: np.ndarray  # bohr^2
    parent: SpeciesRecord

    def __post_init__(self):
        if np.any(self.eps <= 0) or np.any(np.diff(self.eps) <= 0):
            raise DomainError("PR grid must be positive and strictly increasing")

    def as_curve(self) -> CrossSectionCurve:
        """View as a curve so the CSV writer can serialise it (``kind=PR``)."""
        return CrossSectionCurve(
            energy=self.eps,
            sigma=self.sigma,
            parameterization="photoelectron",
            source_label=f"photorecombination of {self.parent.name} via detailed balance",
            kind="PR",
        )


def pr_curve(species: SpeciesRecord, eps_grid, extend: bool = False) -> PrCurve:
    eps = np.asarray([units.as_hartree(e) for e in np.atleast_1d(eps_grid)], dtype=float)
    return PrCurve(eps=eps, sigma=pr_from_pi_au(species, eps, extend), parent=species)
