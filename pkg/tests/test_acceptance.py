"""Exit criteria, one test per criterion at the stated tolerance.

Each test records a one-line verdict; ``conftest.py`` prints the lines in
the terminal summary, and ``python3 tests/test_acceptance.py`` prints them
directly.
"""

import functools
import math
import time

import numpy as np
import pytest
import scipy.constants as sc

import icec
from icec import units
from icec.cli import EXIT_DATA, EXIT_FACTORIZATION, EXIT_OK, EXIT_QUADRATURE, EXIT_SCHEMA, main
from icec.core import Neighbor, Scenario, icec_threshold, p_coefficient, scan, sigma_icec_multi, sigma_icec_single
from icec.detailed_balance import pi_from_pr, pr_factor, pr_from_pi
from icec.oracle import DipoleModel, QuadratureSpec, verify_factorization
from icec.scenario_file import load_scenario
from icec.units import Area, Energy, Length
from icec.xs_tables import CrossSectionCurve, SpeciesRecord

pytestmark = pytest.mark.acceptance

VERDICTS: list[str] = []
SCN = icec.data_path("scenarios")


def record(number, title, ok, detail, t0):
    line = f"[{'PASS' if ok else 'FAIL'}] AC{number} {title}: {detail} ({time.perf_counter() - t0:.2f} s)"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def criterion(number, title):
    """Make sure a criterion that crashes still reports a FAIL line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            seen = len(VERDICTS)
            try:
                return fn(*args, **kwargs)
            except Exception as exc:
                if len(VERDICTS) == seen:
                    line = f"[FAIL] AC{number} {title}: {type(exc).__name__}: {exc}"
                    VERDICTS.append(line)
                    print(line)
                raise

        return run

    return wrap


def flat(name, binding_eV, sigma_Mb=1.0, g_i=1, g_f=1):
    e = units.ev_to_hartree(np.linspace(0.0, 300.0, 6))
    curve = CrossSectionCurve(e, np.full(6, units.mb_to_au(sigma_Mb)), "photoelectron")
    return SpeciesRecord(name, Energy(binding_eV), g_i, g_f, curve)


@criterion(1, "threshold Br/Cl-")
def test_ac1_threshold():
    t0 = time.perf_counter()
    got = icec_threshold(Energy(3.313, "eV"), Energy(3.601, "eV")).to("eV").value
    err = abs(got - 0.288)
    record(1, "threshold Br/Cl-", err <= 1e-9, f"{got:.12f} eV, |err| = {err:.1e} eV (tol 1e-9)", t0)


@criterion(2, "detailed-balance round trip")
def test_ac2_detailed_balance_round_trip():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    n = 100_000
    ea = rng.uniform(0.01, 2.0, n)
    g = rng.integers(1, 13, n) / rng.integers(1, 13, n)
    eps = 10.0 ** rng.uniform(-6, 1, n)
    sigma_pi = 10.0 ** rng.uniform(-5, 3, n)
    sigma_pr = pr_factor(ea, eps, g) * sigma_pi
    back = sigma_pr / pr_factor(ea, eps, g)
    worst = float(np.max(np.abs(back / sigma_pi - 1.0)))
    # the object-level API on a sample of the same draws
    for i in range(0, n, 5000):
        sp = flat("X", units.hartree_to_ev(ea[i]), 1.0, 1, 1)
        pr = pr_from_pi(sp, eps[i])
        worst = max(worst, abs(pi_from_pr(sp, eps[i], pr).to("Mb").value - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    record(2, "detailed-balance round trip", ok, f"max rel err {worst:.1e} over 1e5 samples (tol 1e-12)", t0)


@criterion(3, "P anchor (30 Mb, 3.6 eV, 1 nm)")
def test_ac3_p_anchor():
    t0 = time.perf_counter()
    p = p_coefficient(Area(30.0, "Mb"), Energy(3.6, "eV"), Length(1.0, "nm"))
    hand = 1.2930e4  # docs/p_coefficient_anchor.md
    si = 3 * (sc.hbar * sc.c) ** 4 * 30e-22 / (2 * math.pi * (1e-9) ** 6 * (3.6 * sc.e) ** 4)
    rel = abs(p / hand - 1)
    ok = rel <= 1e-3 and abs(p / si - 1) <= 1e-3 and p > 1e3
    record(3, "P anchor (30 Mb, 3.6 eV, 1 nm)", ok, f"P = {p:.6g}, hand {hand:.5g}, rel diff {rel:.1e} (tol 1e-3)", t0)


@criterion(4, "scaling suite")
def test_ac4_scaling_suite():
    t0 = time.perf_counter()
    a, b = flat("A", 3.0, 2.0, 2, 1), flat("B", 3.2, 10.0)
    eps = Energy(0.5)
    r6 = [sigma_icec_single(a, Neighbor(b, Length(r)), eps).sigma * Length(r).au ** 6 for r in (0.5, 1, 2, 3)]
    spread = (max(r6) - min(r6)) / np.mean(r6)

    single = sigma_icec_multi(Scenario(a, [Neighbor(b, Length(1.0), 1)], [eps]), eps).sigma_total
    n_exact = all(
        sigma_icec_multi(Scenario(a, [Neighbor(b, Length(1.0), n)], [eps]), eps).sigma_total == n * single
        for n in (1, 6, 10)
    )

    # synthetic photon-energy substitution: move EA_A and IP_B together so sigma_PI(e') is unchanged
    base = sigma_icec_single(a, Neighbor(b, Length(1.0)), eps)
    worst4 = 0.0
    for shift in (0.5, 2.0, 10.0):
        a2, b2 = flat("A", 3.0 + shift, 2.0, 2, 1), flat("B", 3.2 + shift, 10.0)
        en = sigma_icec_single(a2, Neighbor(b2, Length(1.0)), eps)
        worst4 = max(worst4, abs((en.p / base.p) / (base.e_vph / en.e_vph) ** 4 - 1))
    ok = spread <= 1e-12 and n_exact and worst4 <= 1e-12
    record(4, "scaling suite", ok,
           f"R^6 spread {spread:.1e} (tol 1e-12), N x single exact = {n_exact}, E_vph^-4 err {worst4:.1e}", t0)


@criterion(5, "figure-level magnitudes")
def test_ac5_figure_level():
    t0 = time.perf_counter()
    br = scan(load_scenario(SCN / "br_cl.scn"))
    open_rows = [r for r in br if r.neighbors[0].open]
    min_ratio = min(r.neighbors[0].sigma / r.sigma_pr for r in open_rows)

    cl = scan(load_scenario(SCN / "cl_br.scn"))
    near_cl = units.au_to_mb(cl[0].neighbors[0].sigma)  # R = 1 nm, first grid point

    mg = scan(load_scenario(SCN / "mg_h2o.scn"))
    row = mg[0]
    mg_ratio = row.neighbors[0].sigma / row.sigma_pr  # one H2O at 5 A
    mg_sigma = units.au_to_mb(row.neighbors[0].sigma)

    checks = [min_ratio > 1e3, 0.4 / 3 <= near_cl <= 0.4 * 3, 1e2 <= mg_ratio < 1e4, mg_sigma > 1.0]
    detail = (
        f"Br/Cl- min ratio {min_ratio:.0f} (>1e3); Cl/Br- at {cl[0].eps_eV:.3g} eV {near_cl:.3g} Mb (within 3x of 0.4 Mb); "
        f"Mg/H2O at {row.eps_eV:.3g} eV ratio {mg_ratio:.0f} ([1e2,1e4)), sigma {mg_sigma:.3g} Mb (>1)"
    )
    ok = all(checks) and time.perf_counter() - t0 < 5.0
    record(5, "figure-level magnitudes", ok, detail, t0)


@criterion(6, "oracle factorization")
def test_ac6_oracle_factorization():
    t0 = time.perf_counter()
    model = DipoleModel(
        d_capture=[[0.3 + 0.1j, 1.0, -0.2j], [0.5, 0.25 - 0.4j, 0.1]],
        d_ionize=[[0.45 - 0.1j, 0.8, 0.15 + 0.3j]],
        e_vph=Energy(14.9), eps_in=Energy(0.16), eps_out=Energy(2.28),
    )
    default = verify_factorization(model, [10, 20, 40])
    high = verify_factorization(model, [10, 20], QuadratureSpec(order=64, tolerance=1e-6))
    bad_b0 = verify_factorization(model, [10, 20], coupling=(1.0, 2.0, 1.0))
    bad_const = verify_factorization(model, [10, 20], prefactor=3 / (2 * math.pi) * 1.01)
    ok = (
        default.passed and default.max_ratio_error <= 5e-3
        and high.passed and high.max_ratio_error <= 1e-6
        and not bad_b0.passed and not bad_const.passed
        and time.perf_counter() - t0 < 30.0
    )
    detail = (
        f"order 16 err {default.max_ratio_error:.1e} (<=5e-3), order 64 err {high.max_ratio_error:.1e} (<=1e-6), "
        f"B0=+2 fails {[c.name for c in bad_b0.failures]}, 1.01x3/2pi fails {[c.name for c in bad_const.failures]}"
    )
    record(6, "oracle factorization", ok, detail, t0)


@criterion(7, "CLI determinism and exit codes")
def test_ac7_cli(tmp_path):
    t0 = time.perf_counter()
    runs = []
    for d in ("a", "b"):
        runs.append(main(["run", str(SCN / "mg_h2o.scn"), "--out", str(tmp_path / d)]))
    same = (tmp_path / "a" / "mg_h2o_results.csv").read_bytes() == (tmp_path / "b" / "mg_h2o_results.csv").read_bytes()

    bad = tmp_path / "bad.scn"
    bad.write_text("capture_species = x\nbogus = 1\n")
    broken = tmp_path / "broken.scn"
    broken.write_text((SCN / "br_cl.scn").read_text().replace("../species/", str(SCN.parent / "species") + "/")
                      .replace("cl_minus.species", "missing.species"))
    oracle = icec.data_path("oracle/default.txt").read_text()
    coarse = tmp_path / "coarse.txt"
    coarse.write_text(oracle.replace("order = 16", "order = 2").replace("tolerance = 5e-3", "tolerance = 1e-9"))
    wrong = tmp_path / "wrong.txt"
    wrong.write_text(oracle + "B0 = 2\n")
    codes = {
        EXIT_SCHEMA: main(["validate", str(bad)]),
        EXIT_DATA: main(["validate", str(broken)]),
        EXIT_QUADRATURE: main(["oracle", str(coarse), "--out", str(tmp_path)]),
        EXIT_FACTORIZATION: main(["oracle", str(wrong), "--out", str(tmp_path)]),
    }
    contract = all(k == v for k, v in codes.items()) and runs == [EXIT_OK, EXIT_OK]
    ok = same and contract and time.perf_counter() - t0 < 5.0
    record(7, "CLI determinism and exit codes", ok,
           f"byte-identical = {same}, exit codes expected->got {codes}", t0)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
