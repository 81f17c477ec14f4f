import math

import numpy as np
import pytest

import prolate.blkernel as K
from prolate.basis import gram_bessel, sinc_indices
from prolate.eigsolve import TikhonovConfig
from prolate.errors import ConfigurationError, DomainError
from prolate.pswf import pswf_bessel_ie
from prolate.quadrature import gauss_legendre_rule, split_gauss_rule

SIGMA = 8.0


def flat_kernel(sigma):
    return K.KernelSpec(sigma, lambda t: sigma / math.pi * np.sinc(sigma * np.asarray(t) / math.pi),
                        lambda xi: np.where(np.abs(xi) <= sigma, 1.0, 0.0), "flat")


def test_flat_spectrum_gives_identity():
    km = K.kernel_matrix_bessel(flat_kernel(SIGMA), 40)
    np.testing.assert_allclose(km, np.eye(40), atol=1e-13)


def test_k2_leading_entry():
    km = K.kernel_matrix_bessel(K.builtin_kernels("K2", SIGMA), 10)
    assert km[0, 0] == pytest.approx(2 / 3, rel=1e-14)
    assert km[0, 1] == 0.0 and km[1, 2] == 0.0


def test_k1_sinc_diagonal():
    km = K.kernel_matrix_sinc(K.builtin_kernels("K1", SIGMA), 5)
    np.testing.assert_allclose(np.diag(km), 0.5, rtol=1e-15)
    np.testing.assert_allclose(km, km.T)


def test_builtin_values():
    k1, k2 = K.builtin_kernels("K1", SIGMA), K.builtin_kernels("k2", SIGMA)
    assert k1.time_fn(0.0) == pytest.approx(SIGMA / (2 * math.pi), rel=1e-15)
    assert k2.time_fn(0.0) == pytest.approx(2 * SIGMA / (3 * math.pi), rel=1e-15)
    assert k1.freq_fn(0.5 * SIGMA) == pytest.approx(0.5)
    assert k2.freq_fn(0.5 * SIGMA) == pytest.approx(0.75)
    assert k1.freq_fn(1.5 * SIGMA) == 0.0
    assert k1.nonnegative and k2.nonnegative


def test_k2_profile_continuous_at_series_switch():
    x = np.array([0.1 - 1e-12, 0.1 + 1e-12])
    v = K._k2_profile(x)
    assert abs(v[0] - v[1]) < 1e-12


@pytest.mark.parametrize("name", ["K1", "K2"])
def test_spectrum_fourier_pair(name):
    # K(t) = (1/2pi) int Ktilde(xi) e^{i xi t} dxi
    k = K.builtin_kernels(name, SIGMA)
    r = split_gauss_rule(400)
    xi = SIGMA * r.nodes
    for t in (0.0, 0.37, 1.9):
        val = SIGMA * (r.weights @ (k.freq_fn(xi) * np.cos(xi * t))) / (2 * math.pi)
        assert val == pytest.approx(k.time_fn(t), abs=1e-13)


def test_unknown_kernel():
    with pytest.raises(ConfigurationError):
        K.builtin_kernels("K3", SIGMA)


def test_odd_spectrum_rejected():
    with pytest.raises(DomainError):
        K.KernelSpec(SIGMA, lambda t: t, lambda xi: np.asarray(xi, dtype=float))


def test_flat_kernel_reduces_to_pswf():
    es = K.kernel_eigen(flat_kernel(SIGMA), "bessel", 60, 8)
    ref = pswf_bessel_ie(SIGMA, 60, 8)
    np.testing.assert_allclose(es.eigenvalues, ref.eigenvalues, atol=1e-10)


@pytest.mark.parametrize("name", ["K1", "K2"])
def test_trace_identity(name):
    # sum of all eigenvalues = int_{-1}^{1} K(0) dt
    k = K.builtin_kernels(name, SIGMA)
    es = K.kernel_eigen(k, "bessel", 60, 60)
    assert es.eigenvalues.sum() == pytest.approx(2 * k.time_fn(0.0), rel=1e-9)


def test_alpha_orthonormal_and_eigenfunctions():
    k = K.builtin_kernels("K2", SIGMA)
    es = K.kernel_eigen(k, "bessel", 60, 6)
    np.testing.assert_allclose(es.alpha.T @ es.alpha, np.eye(6), atol=1e-12)
    t = np.linspace(-0.95, 0.95, 9)
    for n in range(3):
        lhs = K.apply_forward(k, lambda s: es(n, s), t)
        np.testing.assert_allclose(lhs, es.eigenvalues[n] * es(n, t), atol=1e-9)
        assert es(n, 1.0) > 0


def test_eigenvalues_positive_and_descending():
    es = K.kernel_eigen(K.builtin_kernels("K1", SIGMA), "bessel", 60, 10)
    assert np.all(np.diff(es.eigenvalues) <= 0) and es.eigenvalues[-1] > 0


def test_sinc_kernel_eigen_parity():
    es = K.kernel_eigen(K.builtin_kernels("K2", SIGMA), "sinc", 201, 4)
    assert [p.name for p in es.parity] == ["EVEN", "ODD", "EVEN", "ODD"]
    assert es.indices.size == 201 and np.array_equal(es.indices, sinc_indices(201))


def test_sinc_kernel_truncation_error_small():
    # a finite sinc block approximates the Bessel eigenvalues to about 1%
    k = K.builtin_kernels("K2", SIGMA)
    s = K.kernel_eigen(k, "sinc", 1001, 6).eigenvalues
    b = K.kernel_eigen(k, "bessel", 60, 6).eigenvalues
    np.testing.assert_allclose(s, b, rtol=1e-2)


def test_forward_zero_and_linearity():
    k = K.builtin_kernels("K2", SIGMA)
    t = np.linspace(-3, 3, 7)
    np.testing.assert_array_equal(K.apply_forward(k, lambda s: 0 * s, t), 0.0)
    a = K.apply_forward(k, np.cos, t) + 2 * K.apply_forward(k, np.sin, t)
    np.testing.assert_allclose(K.apply_forward(k, lambda s: np.cos(s) + 2 * np.sin(s), t), a,
                               atol=1e-14)
    assert isinstance(K.apply_forward(k, np.cos, 0.2), float)


@pytest.mark.parametrize("name", ["pair1", "pair2"])
def test_pairs_match_forward_operator(name):
    p = K.test_signal_pair(name, 2)
    k = K.builtin_kernels("K2", p.sigma)
    t = np.array([-2.5, -1.0, -0.4, 0.0, 0.3, 1.0, 3.7])
    np.testing.assert_allclose(K.apply_forward(k, p.y, t, gauss_legendre_rule(2000)), p.x(t),
                               atol=1e-8)


def test_pair_validation():
    with pytest.raises(DomainError):
        K.test_signal_pair("pair1", 2.5)
    with pytest.raises(ConfigurationError):
        K.test_signal_pair("pair3")


@pytest.fixture(scope="module")
def inv4():
    p = K.test_signal_pair("pair1", 4)
    return p, K.Inverter(K.builtin_kernels("K2", p.sigma), "bessel", 80)


def test_inversion_zero(inv4):
    _, inv = inv4
    res = inv.solve(lambda t: 0 * t, TikhonovConfig(1e-10))
    assert np.all(res.ytilde.coeffs == 0.0)


def test_inversion_domain(inv4):
    p, inv = inv4
    res = inv.solve(p.x, TikhonovConfig(1e-10))
    with pytest.raises(DomainError):
        res(1.5)
    t = np.linspace(-0.9, 0.9, 19)
    np.testing.assert_allclose(res(t), p.y(t), atol=1e-2)


def test_sobolev_without_derivatives_is_standard(inv4):
    from prolate.eigsolve import SobolevTikhonov
    _, inv = inv4
    z = np.zeros_like(inv.matrix)
    sob = SobolevTikhonov(inv.matrix, z, z)
    b = inv.project(np.cos)
    np.testing.assert_allclose(sob.solve(b, 1e-6), inv.standard.solve(b, 1e-6), rtol=1e-7,
                               atol=1e-10)


def test_invert_rejects_sinc_sobolev():
    k = K.builtin_kernels("K2", SIGMA)
    with pytest.raises(ConfigurationError):
        K.invert(k, np.cos, "sinc", 51, TikhonovConfig(1e-6, "sobolev"))
    with pytest.raises(ConfigurationError):
        K.Inverter(k, "sinc", 51).sobolev


def test_round_trip_from_eigenfunction():
    k = K.builtin_kernels("K2", SIGMA)
    es = K.kernel_eigen(k, "bessel", 60, 3)
    res = K.invert(k, lambda t: es.eigenvalues[1] * es(1, t), "bessel", 60, TikhonovConfig(1e-12))
    t = np.linspace(-0.9, 0.9, 11)
    np.testing.assert_allclose(res(t), es(1, t), atol=1e-5)
