import numpy as np
import pytest

import icec
from icec.units import Energy, ev_to_hartree, mb_to_au
from icec.xs_tables import CrossSectionCurve, SpeciesRecord, load_species


def flat_species(name="X", binding_eV=3.0, sigma_Mb=1.0, g_initial=1, g_final=1, emax_eV=50.0, l=None):
    """Species whose curve is constant sigma_Mb over photoelectron energies [0, emax_eV]."""
    e = ev_to_hartree(np.linspace(0.0, emax_eV, 11))
    curve = CrossSectionCurve(e, np.full(e.shape, mb_to_au(sigma_Mb)), "photoelectron", f"flat {sigma_Mb} Mb", l=l)
    return SpeciesRecord(name, Energy(binding_eV, "eV"), g_initial, g_final, curve)


@pytest.fixture
def species_dir():
    return icec.data_path("species")


@pytest.fixture
def scenario_dir():
    return icec.data_path("scenarios")


@pytest.fixture
def bundled(species_dir):
    return {p.stem: load_species(p) for p in species_dir.glob("*.species")}


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
