import numpy as np
import pytest

from icec.errors import ConvergenceError, DomainError, FactorizationMismatch
from icec.oracle import (
    DipoleModel,
    QuadratureSpec,
    cartesian_to_spherical,
    expected_ratio,
    rotate_components,
    rotation_zyz,
    sigma_micro,
    sigma_pi_model,
    sigma_pr_model,
    spherical_to_cartesian,
    tmatrix,
    verify_factorization,
)

A = [0.3 + 0.1j, 1.0, -0.2j]
B = [0.45 - 0.1j, 0.8, 0.15 + 0.3j]


def random_model(rng, r=12.0):
    g_in, g_out = rng.integers(1, 4, 2)
    cplx = lambda *s: rng.normal(size=s) + 1j * rng.normal(size=s)  # noqa: E731
    e_vph = rng.uniform(0.2, 2.0)
    return DipoleModel(
        d_capture=cplx(g_in, 3) * rng.uniform(0.1, 10),
        d_ionize=cplx(g_out, 3) * rng.uniform(0.1, 10),
        e_vph=e_vph,
        r=r,
        c_s=rng.uniform(0.3, 2.0),
        eps_in=rng.uniform(0.01, 0.9) * e_vph,
        eps_out=rng.uniform(0.01, 0.9) * e_vph,
    )


def test_tmatrix_axis_example():
    m = DipoleModel([0, 1, 0], [0, 1, 0], r=1.0, c_s=1.0)
    assert tmatrix(m) == -2.0
    m1 = DipoleModel([1, 0, 0], [1, 0, 0], r=1.0)
    assert tmatrix(m1) == pytest.approx(1.0)


def test_tmatrix_scales_inverse_cube():
    m = DipoleModel(A, B, r=5.0)
    assert tmatrix(m.at_distance(10.0)) == pytest.approx(tmatrix(m) / 8, rel=1e-14)


def test_tmatrix_equals_cartesian_dipole_coupling():
    rng = np.random.default_rng(3)
    m = DipoleModel(A, B, r=7.0, c_s=1.3)
    for _ in range(20):
        oa, ob = rng.uniform(0, np.pi, 3), rng.uniform(0, np.pi, 3)
        a = spherical_to_cartesian(rotate_components(m.d_capture[0], rotation_zyz(*oa)))
        b = spherical_to_cartesian(rotate_components(m.d_ionize[0], rotation_zyz(*ob)))
        ref = 1.3 / 7.0**3 * (a @ b.conj() - 3 * a[2] * np.conj(b[2]))
        assert tmatrix(m, oa, ob) == pytest.approx(ref, rel=1e-12)


def test_spherical_basis_unitary():
    rng = np.random.default_rng(5)
    v = rng.normal(size=(50, 3)) + 1j * rng.normal(size=(50, 3))
    np.testing.assert_allclose(spherical_to_cartesian(cartesian_to_spherical(v)), v, atol=1e-14)
    np.testing.assert_allclose(np.linalg.norm(cartesian_to_spherical(v), axis=1), np.linalg.norm(v, axis=1))


def test_rotations_orthogonal():
    r = rotation_zyz([0.3, 1.0], [0.7, 2.0], [1.1, -0.4])
    for m in r:
        np.testing.assert_allclose(m @ m.T, np.eye(3), atol=1e-14)
        assert np.linalg.det(m) == pytest.approx(1.0)


def test_zero_dipoles():
    assert sigma_micro(DipoleModel([0, 0, 0], B)).value == 0.0
    assert sigma_micro(DipoleModel(A, [0, 0, 0])).value == 0.0
    assert sigma_micro(DipoleModel(A, B)).value > 0


def test_doubling_gives_sixteen():
    m = DipoleModel(A, B)
    assert sigma_micro(m.scaled(2.0)).value == pytest.approx(16 * sigma_micro(m).value, rel=1e-12)


def test_c_s_squared():
    m = DipoleModel(A, B)
    m2 = DipoleModel(A, B, c_s=3.0)
    assert sigma_micro(m2).value == pytest.approx(9 * sigma_micro(m).value, rel=1e-12)


def test_order_n_and_2n_agree():
    iso = DipoleModel([1, 1, 1], [1, 1, 1])
    s8 = sigma_micro(iso, QuadratureSpec(8)).value
    s16 = sigma_micro(iso, QuadratureSpec(16)).value
    assert s8 == pytest.approx(s16, rel=5e-3)


def test_non_convergence_reports_estimate():
    with pytest.raises(ConvergenceError) as exc:
        sigma_micro(DipoleModel(A, B), QuadratureSpec(order=2, tolerance=1e-9))
    assert exc.value.estimate > 0
    assert exc.value.error_estimate > 1e-9


def test_channel_additivity():
    m = DipoleModel([1, 1, 1], [1, 1, 1])
    s = {k: sigma_micro(m, channels=[k]).value for k in (-1, 0, 1)}
    assert s[0] == pytest.approx(4 * s[1], rel=1e-12)
    assert s[-1] == pytest.approx(s[1], rel=1e-12)
    assert sigma_micro(m).value == pytest.approx(sum(s.values()), rel=1e-12)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(order=1)
    with pytest.raises(DomainError):
        QuadratureSpec(tolerance=0)
    with pytest.raises(DomainError):
        DipoleModel(A, B, r=0.0)
    with pytest.raises(DomainError):
        DipoleModel([1, 2], B)


def test_twenty_random_models():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        m = random_model(rng)
        ratio = sigma_micro(m).value / (sigma_pr_model(m) * sigma_pi_model(m))
        assert ratio == pytest.approx(expected_ratio(m), rel=5e-3)


def test_verify_default_passes():
    m = DipoleModel([A, [0.5, 0.25 - 0.4j, 0.1]], B, e_vph=0.55, eps_in=0.006, eps_out=0.08)
    rep = verify_factorization(m, [10, 20, 40])
    assert rep.passed, rep.to_text()
    assert rep.max_ratio_error <= 5e-3
    rep.raise_for_failure()


def test_verify_single_r_skips_constancy():
    rep = verify_factorization(DipoleModel(A, B), [15.0])
    status = {c.name: c.passed for c in rep.checks}
    assert status["r6_constancy"] is None
    assert status["ratio"] is True
    assert rep.passed


def test_verify_detects_b0_sign():
    rep = verify_factorization(DipoleModel(A, B), [10, 20], coupling=(1.0, 2.0, 1.0))
    assert not rep.passed
    assert [c.name for c in rep.failures] == ["dipole_coupling"]
    with pytest.raises(FactorizationMismatch):
        rep.raise_for_failure()


def test_verify_detects_b0_magnitude():
    rep = verify_factorization(DipoleModel(A, B), [10, 20], coupling=(1.0, -1.0, 1.0))
    assert {c.name for c in rep.failures} >= {"dipole_coupling", "ratio"}


def test_verify_detects_wrong_constant():
    rep = verify_factorization(DipoleModel(A, B), [10, 20], prefactor=3 / (2 * np.pi) * 1.02)
    assert [c.name for c in rep.failures] == ["ratio"]
    with pytest.raises(FactorizationMismatch) as exc:
        rep.raise_for_failure()
    assert exc.value.measured == pytest.approx(0.02 / 1.02, rel=1e-6)


def test_report_formats():
    rep = verify_factorization(DipoleModel(A, B), [10, 20, 40])
    text = rep.to_text()
    assert text.startswith("convention:")
    assert all(": " in line or "=" in line for line in text.splitlines())
    rows = rep.to_csv().splitlines()
    assert rows[0] == "R_bohr,sigma_micro_au,ratio,expected_ratio"
    assert len(rows) == 4


def test_report_deterministic():
    m = DipoleModel(A, B)
    assert verify_factorization(m, [10, 20]).to_csv() == verify_factorization(m, [10, 20]).to_csv()
