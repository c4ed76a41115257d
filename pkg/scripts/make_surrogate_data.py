"""Regenerate the bundled surrogate cross-section curves.

The curves are smooth analytic stand-ins with realistic magnitudes, not
measured data.  Each file says so in its ``# source:`` line.

    python3 scripts/make_surrogate_data.py
"""

from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "icec" / "data" / "curves"


def halide_pd(eprime, s_max, e_c):
    """s-wave photodetachment shape: rises as sqrt(e') and saturates at s_max."""
    return s_max * np.sqrt(eprime / (eprime + e_c))


def mg_plus_pi(eprime, s0=0.25, e0=5.0, p=1.5):
    """Finite at threshold, slowly decreasing."""
    return s0 / (1.0 + eprime / e0) ** p


def h2o_pi(eprime):
    return 8.0 + 12.0 * (1.0 - np.exp(-eprime / 2.0))


def write(name, head, source, energies, sigma):
    lines = [head, f"# source: {source}"]
    lines += [f"{x:.9g},{y:.9g}" for x, y in zip(energies, sigma)]
    (OUT / name).write_text("\n".join(lines) + "\n", encoding="ascii")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    near = np.concatenate([[0.0], np.geomspace(1e-3, 5.0, 60)])
    wide = np.concatenate([[0.0], np.geomspace(1e-2, 30.0, 60)])

    write("br_minus_pd.csv", "# parameterization=photon, units=eV,Mb, l=0",
          "analytic surrogate for Br- photodetachment, 30 Mb * sqrt(e'/(e'+3 eV)); indexed by photon energy",
          3.313 + near, halide_pd(near, 30.0, 3.0))
    write("cl_minus_pd.csv", "# parameterization=photoelectron, units=eV,Mb, l=0",
          "analytic surrogate for Cl- photodetachment, 30 Mb * sqrt(e'/(e'+2 eV))",
          near, halide_pd(near, 30.0, 2.0))
    write("mg_plus_pi.csv", "# parameterization=photoelectron, units=eV,Mb",
          "analytic surrogate for Mg+ photoionization, 0.25 Mb / (1+e'/5 eV)^1.5",
          wide, mg_plus_pi(wide))
    write("h2o_pi.csv", "# parameterization=photon, units=eV,Mb",
          "analytic surrogate for H2O photoionization, 8 + 12*(1-exp(-e'/2 eV)) Mb; indexed by photon energy",
          12.62 + wide, h2o_pi(wide))


if __name__ == "__main__":
    main()
