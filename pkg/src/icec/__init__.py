"""Asymptotic interatomic Coulombic electron capture (ICEC) cross sections.

Typical use::

    from icec import load_scenario, scan
    rows = scan(load_scenario(icec.data_path("scenarios/br_cl.scn")))
"""

from pathlib import Path

from .core import (
    IcecResultRow,
    Neighbor,
    NeighborEntry,
    ScanOptions,
    Scenario,
    icec_threshold,
    outgoing_energy,
    p_coefficient,
    scan,
    sigma_icec_multi,
    sigma_icec_single,
)
from .detailed_balance import pi_from_pr, pr_curve, pr_from_pi
from .errors import *  # noqa: F401,F403
from .oracle import DipoleModel, QuadratureSpec, sigma_micro, tmatrix, verify_factorization
from .scenario_file import load_scenario, parse_scenario
from .units import Area, Energy, Length, to_atomic
from .xs_tables import CrossSectionCurve, SpeciesRecord, interpolate, load_curve, load_species, serialize_curve

__version__ = "0.1.0"

_DATA = Path(__file__).resolve().parent / "data"


def data_path(relative: str = "") -> Path:
    """Path inside the bundled data directory."""
    return _DATA / relative


__all__ = [
    "Area", "CrossSectionCurve", "DipoleModel", "Energy", "IcecResultRow", "Length", "Neighbor",
    "NeighborEntry", "QuadratureSpec", "ScanOptions", "Scenario", "SpeciesRecord", "data_path",
    "icec_threshold", "interpolate", "load_curve", "load_scenario", "load_species", "outgoing_energy",
    "p_coefficient", "parse_scenario", "pi_from_pr", "pr_curve", "pr_from_pi", "scan", "serialize_curve",
    "sigma_icec_multi", "sigma_icec_single", "sigma_micro", "tmatrix", "to_atomic", "verify_factorization",
]
