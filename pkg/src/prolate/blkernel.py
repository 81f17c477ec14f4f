"""
Eigenproblems and inverse problems for bandlimited convolution kernels on (-1, 1).

A kernel ``K`` with spectrum ``Ktilde`` supported in ``[-sigma, sigma]`` is
degenerate in either bandlimited basis:

* Bessel: ``Kmat_mn = (-1)^((m-n)/2) int_{-1}^{1} Pbar_m(xi) Ktilde(sigma xi) Pbar_n(xi) dxi``
  (zero for ``m + n`` odd);
* sinc: ``Kmat_mn = (pi / sigma) K((m - n) pi / sigma)``.

With ``G`` the basis Gram matrix, eigenpairs solve ``lambda beta = G Kmat beta``
and the eigenfunction is ``sum_m (Kmat beta)_m b_m(t)``.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, NamedTuple

import numpy as np

from .basis import (BasisKind, BasisTag, CoeffVector, Parity, basis_matrix,
                    diff_matrix_bessel, gram_bessel, gram_sinc, sinc_indices)
from .eigsolve import (EigenSystem, Penalty, SobolevTikhonov, StandardTikhonov,
                       TikhonovConfig, eig_sym_dense)
from .errors import AccuracyError, ConfigurationError, DomainError
from .extrapolate import relative_error
from .quadrature import (QuadRule, RuleKind, default_n_quad, gauss_legendre_rule, refine_rule,
                         split_gauss_rule)
from .specfun import legendre_pbar_seq, sinc, sine_integral

__all__ = [
    "KernelSpec",
    "builtin_kernels",
    "kernel_matrix_bessel",
    "kernel_matrix_sinc",
    "KernelEigenSet",
    "kernel_eigen",
    "apply_forward",
    "Inverter",
    "InversionResult",
    "invert",
    "SignalPair",
    "test_signal_pair",
    "KERNEL_CHECK_TOL",
]

KERNEL_CHECK_TOL = 1e-10
NEG_EIG_TOL = 1e-10
FORWARD_NODES = 800


@dataclass(frozen=True)
class KernelSpec:
    """
    A real, even, sigma-bandlimited kernel.

    ``time_fn(t)`` evaluates ``K(t)``; ``freq_fn(xi)`` evaluates ``Ktilde(xi)``
    for ``xi`` in ``[-sigma, sigma]``. Construction rejects spectra that are
    not even (non-self-adjoint operators are out of scope).
    """

    sigma: float
    time_fn: Callable = field(repr=False)
    freq_fn: Callable = field(repr=False)
    name: str = "custom"

    def __post_init__(self):
        sigma = BasisKind(BasisTag.BESSEL, self.sigma).sigma
        object.__setattr__(self, "sigma", sigma)
        xi = np.linspace(0.0, sigma, 37)[1:-1]
        a = np.asarray(self.freq_fn(xi), dtype=float)
        b = np.asarray(self.freq_fn(-xi), dtype=float)
        if not np.allclose(a, b, rtol=1e-12, atol=1e-14 * max(1.0, np.max(np.abs(a)))):
            raise DomainError("kernel spectrum must be even (self-adjoint operator)")

    @property
    def nonnegative(self) -> bool:
        """True when the sampled spectrum is non-negative (positive semi-definite operator)."""
        xi = np.linspace(-self.sigma, self.sigma, 201)[1:-1]
        return bool(np.all(np.asarray(self.freq_fn(xi)) >= 0.0))

    def scaled_spectrum(self, xi):
        """``Ktilde(sigma xi)`` for ``xi`` in (-1, 1)."""
        return np.asarray(self.freq_fn(self.sigma * np.asarray(xi, dtype=float)), dtype=float)


def _k2_profile(x):
    # (sin x / x - cos x) / x^2, with its series near 0
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 0.1
    xs = np.where(small, 1.0, x)
    direct = (np.sin(xs) / xs - np.cos(xs)) / (xs * xs)
    x2 = x * x
    series = 1 / 3 - x2 / 30 + x2 * x2 / 840 - x2 ** 3 / 45360 + x2 ** 4 / 3991680
    return np.where(small, series, direct)


def builtin_kernels(name: str, sigma: float) -> KernelSpec:
    """
    Built-in kernels.

    ``K1``: ``K(t) = (sigma / 2 pi) sinc^2(sigma t / 2)``, ``Ktilde = (1 - |xi|/sigma)``
    on the band (a kink at 0).
    ``K2``: ``K(t) = (2 sigma / pi) (sin x / x - cos x) / x^2`` with ``x = sigma t``,
    ``Ktilde = 1 - (xi / sigma)^2`` on the band.
    """
    sigma = BasisKind(BasisTag.BESSEL, sigma).sigma
    key = str(name).upper()
    band = lambda xi: np.abs(np.asarray(xi, dtype=float)) <= sigma  # noqa: E731
    if key == "K1":
        return KernelSpec(
            sigma,
            lambda t: sigma / (2 * math.pi) * sinc(0.5 * sigma * np.asarray(t, dtype=float)) ** 2,
            lambda xi: np.where(band(xi), 1.0 - np.abs(np.asarray(xi, dtype=float)) / sigma, 0.0),
            "K1",
        )
    if key == "K2":
        return KernelSpec(
            sigma,
            lambda t: 2 * sigma / math.pi * _k2_profile(sigma * np.asarray(t, dtype=float)),
            lambda xi: np.where(band(xi), 1.0 - (np.asarray(xi, dtype=float) / sigma) ** 2, 0.0),
            "K2",
        )
    raise ConfigurationError(f"unknown kernel {name!r}; choose K1 or K2")


# ---------------------------------------------------------------- kernel matrices

def _bessel_kmat(k, n_basis, rule):
    idx = np.arange(n_basis)
    p = legendre_pbar_seq(n_basis - 1, rule.nodes)
    km = (p * (rule.weights * k.scaled_spectrum(rule.nodes))) @ p.T
    km = 0.5 * (km + km.T)
    diff = idx[:, None] - idx[None, :]
    km[diff % 2 == 1] = 0.0
    km *= np.where(diff % 4 == 0, 1.0, -1.0)
    return km


def _kmat_check(k, n_basis, rule, km):
    fine = _bessel_kmat(k, n_basis, refine_rule(rule))
    return float(np.max(np.abs(fine - km)))


def kernel_matrix_bessel(k: KernelSpec, n_basis: int, rule: QuadRule | None = None,
                         check: bool = True) -> np.ndarray:
    """
    Kernel matrix in the Bessel basis, realized as a real symmetric matrix.

    With no ``rule`` a ``4 n_basis`` Gauss rule is tried first; if rule
    doubling shows it is not converged (e.g. a kink in ``Ktilde`` at 0) a
    rule split at the origin is used. An explicit ``rule`` is used as given
    (and still checked when ``check`` is set).

    Raises
    ------
    AccuracyError
        If the quadrature is not converged to 1e-10.
    """
    n_basis = int(n_basis)
    if n_basis < 1:
        raise ValueError("n_basis must be positive")
    explicit = rule is not None
    if not explicit:
        rule = gauss_legendre_rule(default_n_quad(n_basis))
    km = _bessel_kmat(k, n_basis, rule)
    if not check:
        return km
    err = _kmat_check(k, n_basis, rule, km)
    if err <= KERNEL_CHECK_TOL:
        return km
    if not explicit and rule.kind is not RuleKind.SPLIT_GAUSS:
        rule = split_gauss_rule(default_n_quad(n_basis))
        km = _bessel_kmat(k, n_basis, rule)
        err = _kmat_check(k, n_basis, rule, km)
        if err <= KERNEL_CHECK_TOL:
            return km
    raise AccuracyError(f"kernel matrix quadrature not converged (change {err:.1e})")


def kernel_matrix_sinc(k: KernelSpec, m_max: int | None = None, indices=None) -> np.ndarray:
    """Toeplitz matrix ``(pi / sigma) K((m - n) pi / sigma)`` over ``-m_max..m_max`` or ``indices``."""
    if indices is None:
        if m_max is None:
            raise ValueError("give m_max or indices")
        indices = np.arange(-int(m_max), int(m_max) + 1)
    idx = np.asarray(indices, dtype=int)
    lags = np.arange(idx.max() - idx.min() + 1) * (math.pi / k.sigma)
    col = (math.pi / k.sigma) * np.asarray(k.time_fn(lags), dtype=float)
    return col[np.abs(idx[:, None] - idx[None, :])]


# ---------------------------------------------------------------- eigenproblem

@dataclass(frozen=True)
class KernelEigenSet:
    """
    Eigenpairs of a kernel operator on (-1, 1).

    ``beta[:, n]`` solves ``lambda_n beta = G Kmat beta``, scaled so that the
    eigenfunction coefficients ``phi_coeffs[:, n] = Kmat beta`` have unit norm.
    ``alpha`` holds the orthonormal eigenvectors of the symmetrized matrix.
    """

    sigma: float
    basis: BasisKind
    indices: np.ndarray
    eigenvalues: np.ndarray
    beta: np.ndarray = field(repr=False)
    phi_coeffs: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    parity: tuple = ()

    def __len__(self):
        return self.eigenvalues.size

    def eigenfunction(self, n: int) -> CoeffVector:
        return CoeffVector(self.basis, self.phi_coeffs[:, n], self.parity[n], self.indices)

    def __call__(self, n, t):
        return self.eigenfunction(n)(t)


def _symmetrized(g, km):
    # G = Q D Q^T, S = Q D^(1/2); eigenpairs of S^T Kmat S give those of G Kmat
    es = eig_sym_dense(g)
    d = np.clip(es.eigenvalues, 0.0, None)
    s = es.vectors * np.sqrt(d)
    m = s.T @ km @ s
    return s, eig_sym_dense(m)


def kernel_eigen(k: KernelSpec, basis="bessel", n_basis: int = 200, n_keep: int = 8,
                 rule: QuadRule | None = None, kernel_rule: QuadRule | None = None,
                 check: bool = True) -> KernelEigenSet:
    """
    Leading eigenpairs of the kernel operator in a bandlimited basis.

    Parameters
    ----------
    basis : {"bessel", "sinc"}
        For sinc, ``n_basis`` translates with indices ``sinc_indices(n_basis)``.
    rule : QuadRule, optional
        Quadrature for the Gram matrix (default ``4 n_basis`` Gauss nodes).
    kernel_rule : QuadRule, optional
        Quadrature for the Bessel kernel matrix (see :func:`kernel_matrix_bessel`).

    Raises
    ------
    AccuracyError
        If a kernel with non-negative spectrum yields an eigenvalue below -1e-10.
    """
    tag = BasisTag(basis)
    n_basis = int(n_basis)
    if tag is BasisTag.BESSEL:
        g = gram_bessel(k.sigma, n_basis, rule, check=check).entries
        km = kernel_matrix_bessel(k, n_basis, kernel_rule, check=check)
        idx = np.arange(n_basis)
        groups = [(Parity.EVEN, idx[0::2]), (Parity.ODD, idx[1::2])]
    elif tag is BasisTag.SINC:
        idx = sinc_indices(n_basis)
        g = gram_sinc(k.sigma, rule=rule, indices=idx, check=check).entries
        km = kernel_matrix_sinc(k, indices=idx)
        groups = [(Parity.NONE, np.arange(n_basis))]
    else:
        raise ConfigurationError("kernel_eigen supports the Bessel and sinc bases")

    cand = []
    lowest = np.inf
    for parity, sel in groups:
        if sel.size == 0:
            continue
        s, es = _symmetrized(g[np.ix_(sel, sel)], km[np.ix_(sel, sel)])
        lowest = min(lowest, es.eigenvalues[-1])
        for j in range(len(es)):
            a = es.vectors[:, j]
            b = np.zeros(n_basis)
            b[sel] = s @ a
            full_a = np.zeros(n_basis)
            full_a[sel] = a
            cand.append((es.eigenvalues[j], parity, b, full_a))
    if k.nonnegative and lowest < -NEG_EIG_TOL:
        raise AccuracyError(f"negative eigenvalue {lowest:.2e} for a non-negative kernel")
    cand.sort(key=lambda c: -c[0])
    cand = cand[: min(int(n_keep), len(cand))]
    lam = np.array([c[0] for c in cand])
    beta = np.stack([c[2] for c in cand], axis=1)
    phi = km @ beta
    norms = np.linalg.norm(phi, axis=0)
    norms[norms == 0] = 1.0
    kind = BasisKind(tag, k.sigma)
    # sign: eigenfunction positive at t = 1
    at_one = basis_matrix(kind, idx, [1.0])[:, 0] @ phi
    signs = np.where(at_one < 0, -1.0, 1.0) / norms
    parity = tuple(c[1] for c in cand)
    if tag is BasisTag.SINC:
        parity = tuple(_detect_parity(kind, idx, phi[:, n]) for n in range(phi.shape[1]))
    return KernelEigenSet(k.sigma, kind, idx, lam, beta * signs, phi * signs,
                          np.stack([c[3] for c in cand], axis=1), parity)


def _detect_parity(kind, idx, coeffs):
    t = np.array([0.3, 0.55, 0.8])
    rows = basis_matrix(kind, idx, np.concatenate([t, -t]))
    v = coeffs @ rows
    plus, minus = v[:3], v[3:]
    scale = np.max(np.abs(v))
    if np.max(np.abs(plus - minus)) < 1e-8 * scale:
        return Parity.EVEN
    if np.max(np.abs(plus + minus)) < 1e-8 * scale:
        return Parity.ODD
    return Parity.NONE


# ---------------------------------------------------------------- forward and inverse

def apply_forward(k: KernelSpec, y: Callable, t, rule: QuadRule | None = None):
    """``x(t) = int_{-1}^{1} K(t - s) y(s) ds`` by quadrature."""
    rule = gauss_legendre_rule(FORWARD_NODES) if rule is None else rule
    t_arr = np.asarray(t, dtype=float)
    s = rule.nodes
    wy = rule.weights * np.asarray(y(s), dtype=float)
    flat = t_arr.ravel()
    out = np.empty(flat.size)
    for start in range(0, flat.size, 256):
        chunk = flat[start:start + 256]
        out[start:start + 256] = np.asarray(k.time_fn(chunk[:, None] - s[None, :])) @ wy
    out = out.reshape(t_arr.shape)
    return out if t_arr.ndim else float(out)


@dataclass(frozen=True)
class InversionResult:
    """Recovered coefficients; ``y(t)`` is available on [-1, 1] only."""

    ytilde: CoeffVector
    mu_used: float
    residual_norm: float
    solution_norm: float

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(np.abs(t_arr) > 1.0):
            raise DomainError("the recovered input is only defined on [-1, 1]")
        return self.ytilde(t_arr)


class Inverter:
    """
    Pre-assembled ``M = G Kmat G`` and its factorizations for a kernel and basis.

    ``solve(x, config)`` projects ``x`` on the basis over (-1, 1) and returns
    the regularized solution of ``M ytilde = xhat``.
    """

    def __init__(self, k: KernelSpec, basis="bessel", n_basis: int = 200,
                 rule: QuadRule | None = None, kernel_rule: QuadRule | None = None):
        self.kernel = k
        tag = BasisTag(basis)
        n_basis = int(n_basis)
        self.rule = gauss_legendre_rule(default_n_quad(n_basis)) if rule is None else rule
        if tag is BasisTag.BESSEL:
            self.indices = np.arange(n_basis)
            g = gram_bessel(k.sigma, n_basis, self.rule).entries
            km = kernel_matrix_bessel(k, n_basis, kernel_rule)
        elif tag is BasisTag.SINC:
            self.indices = sinc_indices(n_basis)
            g = gram_sinc(k.sigma, rule=self.rule, indices=self.indices).entries
            km = kernel_matrix_sinc(k, indices=self.indices)
        else:
            raise ConfigurationError("inversion supports the Bessel and sinc bases")
        self.kind = BasisKind(tag, k.sigma)
        self.n_basis = n_basis
        self.matrix = g @ km @ g
        self.matrix = 0.5 * (self.matrix + self.matrix.T)
        self._rows = basis_matrix(self.kind, self.indices, self.rule.nodes)
        self.standard = StandardTikhonov(self.matrix)
        self._sobolev = None

    @property
    def sobolev(self) -> SobolevTikhonov:
        if self.kind.tag is not BasisTag.BESSEL:
            raise ConfigurationError("the Sobolev penalty is only available in the Bessel basis")
        if self._sobolev is None:
            d1 = diff_matrix_bessel(1, self.kind.sigma, self.n_basis)
            self._sobolev = SobolevTikhonov(self.matrix, d1, d1 @ d1)
        return self._sobolev

    def project(self, x: Callable) -> np.ndarray:
        return self._rows @ (self.rule.weights * np.asarray(x(self.rule.nodes), dtype=float))

    def solve(self, x: Callable, config: TikhonovConfig, xhat=None) -> InversionResult:
        if xhat is None:
            xhat = self.project(x)
        if config.penalty is Penalty.SOBOLEV:
            yt = self.sobolev.solve(xhat, config.mu)
        else:
            yt = self.standard.solve(xhat, config.mu)
        resid = self.matrix @ yt - xhat
        return InversionResult(CoeffVector(self.kind, yt, indices=self.indices), config.mu,
                               float(np.linalg.norm(resid)), float(np.linalg.norm(yt)))

    def sweep(self, x: Callable, mus, penalty=Penalty.STANDARD, exact: Callable | None = None):
        """Rows ``(mu, e_rel on (-1,1), residual, ||ytilde||)``; ``e_rel`` is NaN without ``exact``."""
        xhat = self.project(x)
        rows = []
        for mu in np.atleast_1d(mus):
            res = self.solve(x, TikhonovConfig(float(mu), penalty), xhat)
            e = relative_error(exact, res, (-1.0, 1.0)) if exact is not None else float("nan")
            rows.append((float(mu), e, res.residual_norm, res.solution_norm))
        return rows


def invert(k: KernelSpec, x_observed: Callable, basis="bessel", n_basis: int = 200,
           config: TikhonovConfig = TikhonovConfig(1e-10), rule: QuadRule | None = None
           ) -> InversionResult:
    """
    Recover ``y`` on (-1, 1) from ``x = int K(t - s) y(s) ds`` by Tikhonov
    regularization of ``M ytilde = xhat``.

    Raises
    ------
    ConfigurationError
        Sinc basis with the Sobolev penalty.
    NumericalError
        Sobolev penalty with ``mu = 0``.
    """
    if BasisTag(basis) is BasisTag.SINC and config.penalty is Penalty.SOBOLEV:
        raise ConfigurationError("the Sobolev penalty is only available in the Bessel basis")
    return Inverter(k, basis, n_basis, rule).solve(x_observed, config)


# ---------------------------------------------------------------- test pairs

class SignalPair(NamedTuple):
    y: Callable
    x: Callable
    sigma: float


def test_signal_pair(name: str, nu: int = 4) -> SignalPair:
    """
    Input/output pairs for kernel ``K2``.

    ``pair1``: ``y = sin(nu pi t)``, ``x = (2/pi) sin(nu pi t) / (nu pi (1 - t^2))``,
    ``sigma = nu pi``.
    ``pair2``: ``y = sin^2(nu pi t)``,
    ``x = (Si[2 nu pi (1 - t)] + Si[2 nu pi (1 + t)]) / (2 pi)``, ``sigma = 2 nu pi``.
    Both ``y`` vanish outside (-1, 1).
    """
    if float(nu) != int(nu) or int(nu) < 1:
        raise DomainError("nu must be a positive integer")
    nu = int(nu)
    w = nu * math.pi
    key = str(name).lower()

    def box(t):
        return np.abs(np.asarray(t, dtype=float)) < 1.0

    if key == "pair1":
        def y(t):
            t = np.asarray(t, dtype=float)
            return np.where(box(t), np.sin(w * t), 0.0)

        def x(t):
            # sin(nu pi |t|) = -(-1)^nu sin(nu pi (1 - |t|)) removes the 0/0 at |t| = 1
            t = np.asarray(t, dtype=float)
            a = np.abs(t)
            val = -((-1) ** nu) * (2 / math.pi) * sinc(w * (1 - a)) / (1 + a)
            return np.sign(t) * val

        return SignalPair(y, x, w)
    if key == "pair2":
        def y(t):
            t = np.asarray(t, dtype=float)
            return np.where(box(t), np.sin(w * t) ** 2, 0.0)

        def x(t):
            t = np.asarray(t, dtype=float)
            return (sine_integral(2 * w * (1 - t)) + sine_integral(2 * w * (1 + t))) / (2 * math.pi)

        return SignalPair(y, x, 2 * w)
    raise ConfigurationError(f"unknown pair {name!r}; choose pair1 or pair2")


# keep pytest from collecting this as a test when imported into test modules
test_signal_pair.__test__ = False
