import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prolate.basis import (BasisKind, BasisTag, CoeffVector, Parity, basis_matrix,
                           diff_matrix_bessel, eval_basis, gram_bessel, gram_sinc,
                           gram_sinc_parity_split, sinc_indices, truncation_order)
from prolate.errors import AccuracyError, DomainError
from prolate.quadrature import gauss_legendre_rule

BES8 = BasisKind(BasisTag.BESSEL, 8.0)
SINC8 = BasisKind(BasisTag.SINC, 8.0)


@pytest.mark.parametrize("sigma", [0.0, -1.0, float("nan"), float("inf")])
def test_sigma_validation(sigma):
    with pytest.raises(DomainError):
        BasisKind(BasisTag.BESSEL, sigma)


def test_parity_of_index():
    assert Parity.of_index(4) is Parity.EVEN
    assert Parity.of_index(-3) is Parity.ODD


def test_eval_basis_trivial_values():
    assert eval_basis(BES8, 0, 0.0) == pytest.approx(math.sqrt(8 / math.pi), rel=1e-15)
    assert eval_basis(SINC8, 3, 3 * math.pi / 8) == pytest.approx(math.sqrt(8 / math.pi), rel=1e-15)
    # cardinality at the other sinc nodes
    assert abs(eval_basis(SINC8, 3, 5 * math.pi / 8)) < 1e-15


def test_expansion_trivial():
    t = np.linspace(-2, 2, 9)
    e0 = np.zeros(5)
    e0[0] = 1.0
    np.testing.assert_allclose(CoeffVector(BES8, e0)(t), eval_basis(BES8, 0, t), rtol=1e-15)
    np.testing.assert_array_equal(CoeffVector(BES8, np.zeros(5))(t), 0.0)


def test_sinc_indices_convention():
    np.testing.assert_array_equal(sinc_indices(4), [-1, 0, 1, 2])
    np.testing.assert_array_equal(sinc_indices(5), [-2, -1, 0, 1, 2])
    with pytest.raises(ValueError):
        sinc_indices(0)


def test_gram_small_sigma_vanishes():
    j = gram_bessel(1e-6, 10).entries
    assert np.max(np.abs(j)) < 1e-5
    assert j[0, 0] == pytest.approx(2e-6 / math.pi, rel=1e-8)


def test_gram_trace():
    assert abs(np.trace(gram_bessel(8.0, 100).entries) - 16 / math.pi) <= 1e-10


def test_gram_parity_zeros_and_symmetry():
    j = gram_bessel(8.0, 30).entries
    i = np.arange(30)
    assert np.all(j[(i[:, None] + i[None, :]) % 2 == 1] == 0.0)
    assert np.array_equal(j, j.T)


@pytest.mark.parametrize("builder", [gram_bessel, lambda s, n, rule: gram_sinc(s, n, rule)])
def test_gram_self_check_rejects_starved_rule(builder):
    with pytest.raises(AccuracyError):
        builder(8.0, 30, rule=gauss_legendre_rule(12))


def test_gram_spectral_norm_below_one():
    for g in (gram_bessel(8.0, 60).entries, gram_sinc(8.0, 60).entries):
        w = np.linalg.eigvalsh(g)
        assert w.max() < 1.0 + 1e-12
        assert w.min() > -1e-12


def test_parity_split_sizes():
    even, odd = gram_sinc_parity_split(8.0, 20)
    assert even.entries.shape == (21, 21) and odd.entries.shape == (20, 20)
    assert even.parity is Parity.EVEN and odd.parity is Parity.ODD


def _tail_corrected_overlap(sigma, m, n, half_width):
    # composite Gauss on (-L, L) plus the asymptotic tail of j_m j_n ~ sin sin / x^2
    x, w = np.polynomial.legendre.leggauss(40)
    edges = np.linspace(-half_width, half_width, 2001)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * w).ravel()
    rows = basis_matrix(BasisKind(BasisTag.BESSEL, sigma), [m, n], nodes)
    body = weights @ (rows[0] * rows[1])
    tail = (math.sqrt((2 * m + 1) * (2 * n + 1)) * math.cos((m - n) * math.pi / 2)
            / (math.pi * sigma * half_width))
    return body + tail


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (6, 6), (0, 2), (3, 5), (2, 3)])
def test_bessel_orthonormal_on_real_line(m, n):
    val = _tail_corrected_overlap(8.0, m, n, 1500.0)
    assert abs(val - (m == n)) < 1e-6


def test_degenerate_kernel_identity_bessel():
    sigma = 8.0
    t = np.linspace(-1, 1, 25)
    b = basis_matrix(BasisKind(BasisTag.BESSEL, sigma), np.arange(61), t)
    exact = (sigma / math.pi) * np.sinc(sigma * (t[:, None] - t[None, :]) / math.pi)
    assert np.max(np.abs(b.T @ b - exact)) < 1e-10


def test_degenerate_kernel_sinc_converges():
    sigma = 8.0
    t = np.linspace(-1, 1, 23)
    exact = (sigma / math.pi) * np.sinc(sigma * (t[:, None] - t[None, :]) / math.pi)
    errs = []
    for m in (50, 100, 200, 400):
        b = basis_matrix(SINC8, np.arange(-m, m + 1), t)
        errs.append(np.max(np.abs(b.T @ b - exact)))
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 2e-3


def test_diff_matrix_structure():
    d = diff_matrix_bessel(1, 8.0, 12)
    np.testing.assert_array_equal(d, -d.T)
    np.testing.assert_allclose(diff_matrix_bessel(2, 8.0, 12), d @ d)
    assert not np.any(diff_matrix_bessel(1, 8.0, 12) @ np.zeros(12))
    with pytest.raises(ValueError):
        diff_matrix_bessel(3, 8.0, 12)


def test_truncation_order_rules():
    assert truncation_order(8.0, 1e-14) >= math.ceil(math.e * 4) + 8
    assert truncation_order(8.0, 1e-14) == 22
    assert truncation_order(8.0, 0.999) == math.ceil(math.e * 8 / 2) + 8
    assert truncation_order(12.0) > truncation_order(8.0)


@settings(max_examples=25, deadline=None)
@given(sigma=st.floats(0.5, 30.0))
def test_truncation_order_bounds_gram_tail(sigma):
    n = truncation_order(sigma, 1e-14)
    j = gram_bessel(sigma, n + 6, check=False).entries
    assert np.max(np.abs(j[n:, n:])) < 1e-14


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_expansion_is_linear(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal(15), rng.standard_normal(15)
    t = rng.uniform(-3, 3, 7)
    lhs = CoeffVector(BES8, 2 * a - b)(t)
    rhs = 2 * CoeffVector(BES8, a)(t) - CoeffVector(BES8, b)(t)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)
