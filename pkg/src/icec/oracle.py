"""Brute-force microscopic check of the factorized ICEC cross section.

The leading large-R t-matrix couples the capture dipole on A with the
ionization dipole on B::

    t = (C_S / R^3) * sum_m B_m * a_m * conj(b_m),    B_0 = -2, B_{+-1} = 1

with spherical components taken along the interatomic axis.  The
differential cross section (m_e^2 / (2 pi)^2 hbar^4) (k'/k) |t|^2 is
averaged over incidence directions and integrated over emission directions
by product quadrature and compared against P * sigma_PR * sigma_PI built
from the same amplitudes with single-center dipole formulas.

Model conventions (see docs/oracle_conventions.md for the derivation):

* Amplitudes ``d_capture[m]`` / ``d_ionize[m]`` (m = -1, 0, +1) are given in
  the helicity frame of the electron: quantization axis along k (capture)
  or k' (ionization).  The interatomic-axis components at direction
  (theta, phi) are obtained by rotating with R_z(phi) R_y(theta) R_z(gamma).
* The twist gamma about the electron direction stands for the degenerate
  bound substates; it is averaged with a uniform rule (3 nodes are exact for
  rank-1 amplitudes).
* Rows of ``d_capture`` are degenerate initial states (averaged, 1/g_in);
  rows of ``d_ionize`` are final states (summed).
* Continuum states are unit-amplitude plane waves, the normalization under
  which the cross-section prefactor above holds.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels, units
from .core import P_PREFACTOR
from .detailed_balance import pr_factor
from .errors import ConvergenceError, DomainError, FactorizationMismatch
from .units import C_AU, Area

# ordered m = -1, 0, +1
M_VALUES = (-1, 0, 1)
B_COEFFS = (1.0, -2.0, 1.0)
TWIST_NODES = 3
_SQRT2 = math.sqrt(2.0)


def spherical_to_cartesian(v):
    """(..., 3) spherical components [v_-1, v_0, v_+1] -> Cartesian (x, y, z)."""
    v = np.asarray(v, dtype=complex)
    vm, v0, vp = v[..., 0], v[..., 1], v[..., 2]
    return np.stack([(vm - vp) / _SQRT2, 1j * (vp + vm) / _SQRT2, v0], axis=-1)


def cartesian_to_spherical(v):
    v = np.asarray(v, dtype=complex)
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    return np.stack([(x - 1j * y) / _SQRT2, z, -(x + 1j * y) / _SQRT2], axis=-1)


def rotation_zyz(phi, theta, gamma):
    """R_z(phi) R_y(theta) R_z(gamma), broadcast over the angle arrays -> (..., 3, 3)."""
    phi, theta, gamma = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (phi, theta, gamma)))
    ca, sa = np.cos(phi), np.sin(phi)
    cb, sb = np.cos(theta), np.sin(theta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    r = np.empty(phi.shape + (3, 3))
    r[..., 0, 0] = ca * cb * cg - sa * sg
    r[..., 0, 1] = -ca * cb * sg - sa * cg
    r[..., 0, 2] = ca * sb
    r[..., 1, 0] = sa * cb * cg + ca * sg
    r[..., 1, 1] = -sa * cb * sg + ca * cg
    r[..., 1, 2] = sa * sb
    r[..., 2, 0] = -sb * cg
    r[..., 2, 1] = sb * sg
    r[..., 2, 2] = cb
    return r


def rotate_components(d, rot):
    """Spherical components ``d`` (3,) rotated by ``rot`` (..., 3, 3)."""
    cart = spherical_to_cartesian(d)
    return cartesian_to_spherical(np.einsum("...ij,j->...i", rot, cart))


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre in cos(theta) x uniform azimuth, per sphere."""

    order: int = 16
    tolerance: float = 5e-3

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise DomainError(f"quadrature order must be an integer >= 2, got {self.order!r}")
        if not self.tolerance > 0:
            raise DomainError("quadrature tolerance must be > 0")


def orientation_nodes(order: int, twist: int = TWIST_NODES):
    """Rotations and weights for the average over direction and twist.

    Weights sum to one.  Returns (rotations (N, 3, 3), weights (N,)).
    """
    x, w = np.polynomial.legendre.leggauss(order)
    theta = np.arccos(x)
    phi = 2.0 * np.pi * np.arange(order) / order
    gamma = 2.0 * np.pi * np.arange(twist) / twist
    th, ph, ga = np.meshgrid(theta, phi, gamma, indexing="ij")
    wt = np.broadcast_to(w[:, None, None], th.shape) / (2.0 * order * twist)
    rot = rotation_zyz(ph.ravel(), th.ravel(), ga.ravel())
    return rot, wt.ravel().copy()


def _as_states(d) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(d, dtype=complex))
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError("dipole amplitudes must have shape (3,) or (n_states, 3), ordered m = -1, 0, +1")
    if not np.all(np.isfinite(arr)):
        raise DomainError("dipole amplitudes must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DipoleModel:
    """Model transition dipoles of A (capture) and B (ionization), atomic units."""

    d_capture: np.ndarray
    d_ionize: np.ndarray
    e_vph: float = 0.5
    r: float = 10.0
    c_s: float = 1.0
    eps_in: float = 0.05
    eps_out: float = 0.02
    b_coeffs: tuple = field(default=B_COEFFS, init=False)

    def __post_init__(self):
        object.__setattr__(self, "d_capture", _as_states(self.d_capture))
        object.__setattr__(self, "d_ionize", _as_states(self.d_ionize))
        for name, conv in (("e_vph", units.as_hartree), ("r", units.as_bohr),
                           ("eps_in", units.as_hartree), ("eps_out", units.as_hartree)):
            object.__setattr__(self, name, conv(getattr(self, name)))
        object.__setattr__(self, "c_s", float(self.c_s))
        if not self.r > 0:
            raise DomainError("R must be > 0")
        if not (self.e_vph > 0 and self.eps_in > 0 and self.eps_out > 0):
            raise DomainError("E_vph, eps_in and eps_out must be > 0")
        if self.eps_in >= self.e_vph or self.eps_out >= self.e_vph:
            raise DomainError("electron energies must be below E_vph (positive binding energies)")

    @property
    def k_in(self) -> float:
        return units.electron_wavenumber(self.eps_in)

    @property
    def k_out(self) -> float:
        return units.electron_wavenumber(self.eps_out)

    @property
    def g_in(self) -> int:
        return self.d_capture.shape[0]

    def at_distance(self, r) -> "DipoleModel":
        return replace(self, r=units.as_bohr(r))

    def scaled(self, factor_capture: float, factor_ionize: float | None = None) -> "DipoleModel":
        f2 = factor_capture if factor_ionize is None else factor_ionize
        return replace(self, d_capture=self.d_capture * factor_capture, d_ionize=self.d_ionize * f2)


def _coupling(model: DipoleModel, coupling=None, channels=None) -> np.ndarray:
    b = np.array(B_COEFFS if coupling is None else coupling, dtype=float)
    if b.shape != (3,):
        raise DomainError("coupling must hold three coefficients for m = -1, 0, +1")
    if channels is not None:
        keep = np.array([m in set(channels) for m in M_VALUES])
        b = np.where(keep, b, 0.0)
    return b * model.c_s / model.r**3


def tmatrix(model: DipoleModel, orientation_a=(0.0, 0.0, 0.0), orientation_b=(0.0, 0.0, 0.0),
            in_state: int = 0, out_state: int = 0, coupling=None, channels=None) -> complex:
    """Dipole-dipole t-matrix for one pair of orientations.

    Orientations are ZYZ Euler angles (phi, theta, gamma) of the electron
    helicity frames relative to the interatomic axis; the default is the
    identity, where the model amplitudes are used as given.
    """
    if not model.r > 0:
        raise DomainError("R must be > 0")
    c = _coupling(model, coupling, channels)
    a = rotate_components(model.d_capture[in_state], rotation_zyz(*orientation_a))
    b = rotate_components(model.d_ionize[out_state], rotation_zyz(*orientation_b))
    return complex(np.sum(c * a * np.conj(b)))


def _sigma_raw(model: DipoleModel, order: int, coupling=None, channels=None, kernel=None) -> float:
    kernel = kernel or _kernels.orientation_sum
    rot, w = orientation_nodes(order)
    wa = w  # average over incidence directions
    wb = 4.0 * np.pi * w  # integral over emission directions
    c = _coupling(model, coupling, channels)
    total = 0.0
    for da in model.d_capture:
        a = rotate_components(da, rot)
        for db in model.d_ionize:
            b = rotate_components(db, rot)
            total += kernel(a, wa, b, wb, c)
    flux = model.k_out / model.k_in
    return total * flux / (4.0 * np.pi**2) / model.g_in


def sigma_micro(model: DipoleModel, quad: QuadratureSpec | None = None, coupling=None, channels=None,
                kernel=None) -> Area:
    """ICEC cross section from the dipole t-matrix by direct quadrature.

    The result at ``quad.order`` is compared with the rule of half the
    order; a relative difference above ``quad.tolerance`` raises
    :class:`ConvergenceError`.
    """
    quad = quad or QuadratureSpec()
    fine = _sigma_raw(model, quad.order, coupling, channels, kernel)
    coarse = _sigma_raw(model, max(1, quad.order // 2), coupling, channels, kernel)
    scale = max(abs(fine), abs(coarse))
    err = 0.0 if scale == 0.0 else abs(fine - coarse) / scale
    if err > quad.tolerance:
        raise ConvergenceError(
            f"angular quadrature not converged at order {quad.order}: relative change {err:.3e}"
            f" > tolerance {quad.tolerance:.3e} (estimate {fine:.9e} bohr^2)",
            estimate=fine,
            error_estimate=err,
        )
    return Area(fine, "au")


# -- single-center reference cross sections --------------------------------


def _dipole_norm2(states: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(states) ** 2, axis=1)


def sigma_pd_capture_model(model: DipoleModel) -> float:
    """Photodetachment of A^- built from the capture amplitudes, bohr^2.

    sigma = (omega k / (6 pi c)) * integral dOmega |d|^2 averaged over the
    initial states; |d|^2 is rotation invariant so the angular integral is
    4 pi |d|^2.
    """
    omega, k = model.e_vph, model.k_in
    return float(omega * k / (6.0 * np.pi * C_AU) * 4.0 * np.pi * np.mean(_dipole_norm2(model.d_capture)))


def sigma_pr_model(model: DipoleModel) -> float:
    """Photorecombination of A from the photodetachment value via detailed balance (g ratio 1)."""
    binding = model.e_vph - model.eps_in
    return float(pr_factor(binding, model.eps_in, 1.0)) * sigma_pd_capture_model(model)


def sigma_pi_model(model: DipoleModel) -> float:
    omega, k = model.e_vph, model.k_out
    return float(omega * k / (6.0 * np.pi * C_AU) * 4.0 * np.pi * np.sum(_dipole_norm2(model.d_ionize)))


def expected_ratio(model: DipoleModel, prefactor: float = P_PREFACTOR) -> float:
    """sigma_ICEC / (sigma_PR sigma_PI) implied by the asymptotic formula, 1/bohr^2."""
    return model.c_s**2 * prefactor * C_AU**4 / (model.r**6 * model.e_vph**4)


# -- verification -------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool | None  # None = skipped
    measured: float
    limit: float
    detail: str = ""


@dataclass
class FactorizationReport:
    rows: list[tuple[float, float, float, float]]  # (R, sigma_micro, ratio, expected)
    checks: list[Check]
    order: int
    tolerance: float
    backend: str = _kernels.BACKEND

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]

    @property
    def max_ratio_error(self) -> float:
        return max(abs(r / e - 1.0) for _, _, r, e in self.rows)

    def raise_for_failure(self) -> None:
        bad = self.failures
        if bad:
            c = bad[0]
            raise FactorizationMismatch(f"{c.name}: measured {c.measured:.6e} exceeds {c.limit:.3e}. {c.detail}",
                                        measured=c.measured, expected=c.limit)

    def to_text(self) -> str:
        lines = [
            "convention: helicity-frame amplitudes, twist-averaged substates,"
            " initial states averaged (1/g_in), final states summed, unit plane waves",
            f"quadrature_order: {self.order}",
            f"tolerance: {self.tolerance:.3e}",
            f"backend: {self.backend}",
        ]
        for c in self.checks:
            status = "skipped" if c.passed is None else ("pass" if c.passed else "FAIL")
            lines.append(f"check.{c.name}: {status} (measured {c.measured:.6e}, limit {c.limit:.3e})"
                         + (f" {c.detail}" if c.detail else ""))
        for r, s, q, e in self.rows:
            lines.append(f"R_bohr={r:.9g}: sigma_micro={s:.9e} ratio={q:.9e} expected_ratio={e:.9e}")
        lines.append(f"result: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R_bohr", "sigma_micro_au", "ratio", "expected_ratio"])
        for row in self.rows:
            w.writerow([f"{x:.9e}" for x in row])
        return buf.getvalue()


def _coupling_check(model: DipoleModel, coupling, samples: int = 4) -> Check:
    """t from B_m coefficients against the Cartesian dipole-dipole form.

    a.b* - 3 (a.n)(b*.n) with n along the axis is what the B_m sum must
    reproduce at every orientation; the orientation-averaged cross section
    is blind to the sign of B_0, this is not.
    """
    rot, _ = orientation_nodes(samples)
    a = rotate_components(model.d_capture[0], rot)
    b = rotate_components(model.d_ionize[0], rot)
    c = _coupling(model, coupling)
    t_sph = (a * c) @ b.conj().T
    ac, bc = spherical_to_cartesian(a), spherical_to_cartesian(b)
    t_cart = model.c_s / model.r**3 * (ac @ bc.conj().T - 3.0 * np.outer(ac[:, 2], bc[:, 2].conj()))
    scale = np.max(np.abs(t_cart))
    dev = 0.0 if scale == 0 else float(np.max(np.abs(t_sph - t_cart)) / scale)
    return Check("dipole_coupling", dev <= 1e-10, dev, 1e-10, "B_m sum vs Cartesian dipole-dipole tensor")


def verify_factorization(model: DipoleModel, r_list, quad: QuadratureSpec | None = None, coupling=None,
                         prefactor: float = P_PREFACTOR, rescale: float = 3.0, kernel=None) -> FactorizationReport:
    """Check that the microscopic cross section has the factorized form.

    * sigma_micro * R^6 is constant over ``r_list`` (skipped for one R);
    * sigma_micro / (sigma_PR sigma_PI) matches ``prefactor * C_S^2 c^4 / (R^6 E_vph^4)``;
    * that ratio is unchanged when all amplitudes are rescaled;
    * the B_m coefficients reproduce the Cartesian dipole-dipole coupling.

    Returns a report; call ``raise_for_failure`` to turn a failed check
    into :class:`FactorizationMismatch`.  Quadrature failures propagate as
    :class:`ConvergenceError`.
    """
    quad = quad or QuadratureSpec()
    r_list = [units.as_bohr(r) for r in r_list]
    if not r_list:
        raise DomainError("need at least one distance")
    tol = quad.tolerance
    s_pr, s_pi = sigma_pr_model(model), sigma_pi_model(model)
    rows = []
    for r in r_list:
        m = model.at_distance(r)
        s = sigma_micro(m, quad, coupling, kernel=kernel).value
        denom = s_pr * s_pi
        ratio = s / denom if denom > 0 else float("nan")
        rows.append((r, s, ratio, expected_ratio(m, prefactor)))

    checks = [_coupling_check(model, coupling)]

    if len(rows) > 1:
        r6 = np.array([s * r**6 for r, s, _, _ in rows])
        spread = float((r6.max() - r6.min()) / abs(r6.mean())) if r6.mean() != 0 else float("inf")
        checks.append(Check("r6_constancy", spread <= tol, spread, tol))
    else:
        checks.append(Check("r6_constancy", None, 0.0, tol, "single distance"))

    errs = [abs(q / e - 1.0) if np.isfinite(q) else float("inf") for _, _, q, e in rows]
    worst = max(errs)
    checks.append(Check("ratio", worst <= tol, worst, tol,
                        f"worst at R = {rows[int(np.argmax(errs))][0]:.6g} bohr"))

    r0 = r_list[0]
    big = model.scaled(rescale).at_distance(r0)
    s_big = sigma_micro(big, quad, coupling, kernel=kernel).value
    q_big = s_big / (sigma_pr_model(big) * sigma_pi_model(big))
    drift = abs(q_big / rows[0][2] - 1.0) if np.isfinite(rows[0][2]) else float("inf")
    checks.append(Check("homogeneity", drift <= 1e-10, drift, 1e-10, f"amplitudes x{rescale:g}"))

    return FactorizationReport(rows=rows, checks=checks, order=quad.order, tolerance=tol)
