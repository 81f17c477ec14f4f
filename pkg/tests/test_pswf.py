import math

import numpy as np
import pytest

from prolate.errors import ConfigurationError, DomainError
from prolate.pswf import (Method, bessel_series_extension, default_n_keep, eval_pswf,
                          legendre_galerkin_matrix, lgl_diff_matrix, pswf_bessel_ie,
                          pswf_eigenvalue_chain, pswf_fourier, pswf_legendre_galerkin, pswf_nu,
                          pswf_sinc_ie)
from prolate.quadrature import gauss_legendre_rule, lgl_rule

SIGMA = 8.0


@pytest.fixture(scope="module")
def lg8():
    return pswf_legendre_galerkin(SIGMA, 200, 8)


@pytest.fixture(scope="module")
def bes8():
    return pswf_bessel_ie(SIGMA, 60, 8)


@pytest.fixture(scope="module")
def sinc8():
    return pswf_sinc_ie(SIGMA, 200, 8)


def test_default_n_keep():
    assert default_n_keep(8.0) == 15


def test_lg_matrix_diagonal_entry():
    k = 2
    a = legendre_galerkin_matrix(SIGMA, 20, 0)
    diag = a[0] if np.ndim(a[0]) == 1 else np.diag(a)
    expect = k * (k + 1) + SIGMA ** 2 * (2 * k * (k + 1) - 1) / ((2 * k - 1) * (2 * k + 3))
    assert diag[1] == pytest.approx(expect, rel=1e-15)


def test_lgl_diff_matrix_exact_on_polynomials():
    n = 12
    rule, d = lgl_diff_matrix(n)
    x = rule.nodes
    np.testing.assert_array_equal(x, lgl_rule(n).nodes)
    np.testing.assert_allclose(d @ x ** 5, 5 * x ** 4, atol=1e-12)
    np.testing.assert_allclose(d @ np.ones(n), 0.0, atol=1e-12)


def test_lg_small_basis_rejected():
    with pytest.raises(ConfigurationError):
        pswf_legendre_galerkin(SIGMA, 20, 8)


def test_bessel_below_truncation_rejected():
    with pytest.raises(ConfigurationError):
        pswf_bessel_ie(SIGMA, 10, 8)


def test_sinc_below_margin_rejected():
    with pytest.raises(ConfigurationError):
        pswf_sinc_ie(SIGMA, 10, 8)


def test_small_sigma_limit_is_legendre():
    s = pswf_legendre_galerkin(1e-6, 40, 5)
    np.testing.assert_allclose(np.abs(s.unit_coeffs[:5, :5]), np.eye(5), atol=1e-10)
    assert s.eigenvalues[0] == pytest.approx(2e-6 / math.pi, rel=1e-6)


def test_lg_leading_table_value():
    # full Legendre columns are checked in the acceptance suite
    s = pswf_legendre_galerkin(SIGMA, 1000, 8)
    assert s.eigenvalues[0] == pytest.approx(9.999979e-1, rel=5e-7)


def test_chain_matches_bessel(lg8, bes8):
    lam = pswf_eigenvalue_chain(lg8)
    np.testing.assert_allclose(lam, bes8.eigenvalues, rtol=1e-4)
    np.testing.assert_allclose(lg8.eigenvalues, bes8.eigenvalues, rtol=1e-10)


def test_nu_phase_identity(bes8):
    nu = pswf_nu(bes8)
    np.testing.assert_allclose(np.abs(nu) ** 2 * SIGMA / (2 * math.pi), bes8.eigenvalues, rtol=1e-15)
    assert np.all(np.abs(nu[1::2].real) < 1e-15)


def test_bessel_trace_identity():
    s = pswf_bessel_ie(SIGMA, 60, 60)
    assert s.eigenvalues.sum() == pytest.approx(2 * SIGMA / math.pi, abs=1e-12)


@pytest.mark.parametrize("fixture", ["lg8", "bes8", "sinc8"])
def test_parity_and_origin(fixture, request):
    s = request.getfixturevalue(fixture)
    t = np.linspace(0.0, 1.0, 31)
    for n in range(len(s)):
        np.testing.assert_allclose(s(n, -t), (-1) ** n * s(n, t), atol=1e-10)
        if n % 2:
            assert abs(s(n, 0.0)) < 1e-12


def test_sign_convention(bes8, lg8, sinc8):
    for s in (bes8, lg8, sinc8):
        assert all(s(n, 1.0) > 0 for n in range(len(s)))


def test_lg_domain(lg8):
    with pytest.raises(DomainError):
        eval_pswf(lg8, 0, [0.5, 1.5])
    with pytest.raises(IndexError):
        eval_pswf(lg8, 8, 0.0)


def test_bessel_vs_lg_phi2(bes8, lg8):
    t = np.linspace(-1, 1, 101)
    assert np.max(np.abs(bes8(2, t) - lg8(2, t))) < 1e-5


def test_zero_counts(bes8):
    t = np.linspace(-1, 1, 2001)
    for n in range(len(bes8)):
        v = bes8(n, t)
        v = v[np.abs(v) > 1e-13]  # odd n vanish on the grid point t = 0
        assert np.count_nonzero(np.diff(np.sign(v)) != 0) == n


def test_energy_concentration(bes8):
    inside = np.max(np.abs(bes8(0, np.linspace(-1, 1, 201))))
    assert abs(bes8(0, 5.0)) < inside


def test_orthogonality_on_interval(bes8, lg8):
    r = gauss_legendre_rule(200)
    for s in (bes8, lg8):
        v = np.array([s(n, r.nodes) for n in range(6)])
        np.testing.assert_allclose((v * r.weights) @ v.T, np.diag(s.eigenvalues[:6]), atol=1e-8)


def test_orthonormal_on_real_line(bes8):
    # composite Gauss on (-L, L) plus the leading 1/t^2 tail, phi ~ a sin(sigma t - n pi/2)/(sigma t)
    half = 300.0
    x, w = np.polynomial.legendre.leggauss(30)
    edges = np.linspace(-half, half, 3001)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * w).ravel()
    v = np.array([bes8(n, nodes) for n in range(6)])
    gram = (v * weights) @ v.T
    far = 1e5
    amp = np.array([bes8(n, far) * SIGMA * far / math.sin(SIGMA * far - n * math.pi / 2)
                    for n in range(6)])
    n = np.arange(6)
    tail = np.outer(amp, amp) * np.cos((n[:, None] - n[None, :]) * math.pi / 2) / (SIGMA ** 2 * half)
    np.testing.assert_allclose(gram + tail, np.eye(6), atol=1e-6)


def test_evp2_residual(bes8):
    r = gauss_legendre_rule(120)
    t = np.linspace(-1, 1, 41)
    nu = pswf_nu(bes8)
    kern = np.exp(1j * SIGMA * np.outer(t, r.nodes))
    for n in range(6):
        lhs = kern @ (r.weights * bes8(n, r.nodes))
        assert np.max(np.abs(lhs - nu[n] * bes8(n, t))) <= 1e-8


def test_fourier_relation(bes8):
    t = np.linspace(-0.999, 0.999, 77)
    for n in range(6):
        gamma = math.sqrt(2 * math.pi / (SIGMA * bes8.eigenvalues[n]))
        np.testing.assert_allclose(pswf_fourier(bes8, n, SIGMA * t) / gamma, bes8(n, t), atol=1e-8)


def test_fourier_bandlimit_and_parseval(bes8):
    assert pswf_fourier(bes8, 1, 8.0001) == 0.0
    assert np.all(pswf_fourier(bes8, 0, [-20.0, 9.0, 100.0]) == 0.0)
    r = gauss_legendre_rule(200)
    for n in range(4):
        vals = pswf_fourier(bes8, n, SIGMA * r.nodes)
        assert SIGMA * (r.weights @ vals ** 2) / (2 * math.pi) == pytest.approx(1.0, abs=1e-6)


def test_fourier_needs_bessel(lg8):
    with pytest.raises(ConfigurationError):
        pswf_fourier(lg8, 0, 0.0)


def test_sinc_sampling_identity(sinc8):
    for n in range(len(sinc8)):
        c = sinc8.coeffs[n]
        nodes = c.indices * math.pi / SIGMA
        sel = np.abs(nodes) < 3
        np.testing.assert_allclose(sinc8(n, nodes[sel]), math.sqrt(SIGMA / math.pi) * c.coeffs[sel],
                                   atol=1e-9)


def test_sinc_close_to_bessel(sinc8, bes8):
    # odd-index sinc errors fall only like 1/m_max
    np.testing.assert_allclose(sinc8.eigenvalues, bes8.eigenvalues, rtol=2e-2)
    np.testing.assert_allclose(sinc8.eigenvalues[0::2], bes8.eigenvalues[0::2], rtol=1e-5)
    assert sinc8.method is Method.SINC_IE


def test_series_extension(lg8, bes8):
    ext = bessel_series_extension(lg8, 1, np.array([2.0, 3.5]))
    np.testing.assert_allclose(ext.values, bes8(1, np.array([2.0, 3.5])), atol=1e-4)
    assert not ext.ill_conditioned
    assert bessel_series_extension(lg8, 7, 0.5).ill_conditioned
    s = pswf_legendre_galerkin(SIGMA, 200, 9)
    assert bessel_series_extension(s, 8, 0.5).ill_conditioned
    with pytest.raises(ConfigurationError):
        bessel_series_extension(bes8, 0, 0.5)
