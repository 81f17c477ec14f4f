"""
Prolate spheroidal wave functions of order zero by three methods.

* ``pswf_legendre_galerkin``: Sturm-Liouville problem in normalized Legendre
  polynomials; eigenvalues from the connection-formula chain. Valid on [-1, 1]
  (use ``bessel_series_extension`` to go beyond).
* ``pswf_bessel_ie``: integral equation in the spherical Bessel basis, valid
  on the whole line.
* ``pswf_sinc_ie``: integral equation in sinc translates, valid on the whole line.

Normalization: ``int_{-1}^{1} phi_n^2 = lambda_n`` and ``int_R phi_n^2 = 1``.
Sign: every ``phi_n`` is positive at ``t = 1``.
"""

from dataclasses import dataclass, field
from enum import Enum
import math
from typing import NamedTuple

import numpy as np

from .basis import (BasisKind, BasisTag, CoeffVector, Parity, basis_matrix,
                    eval_expansion, gram_bessel, gram_sinc_parity_split,
                    truncation_order)
from .eigsolve import eig_sym_dense, eig_sym_tridiagonal
from .errors import AccuracyError, ConfigurationError, DomainError, NumericalError
from .quadrature import lgl_rule
from .specfun import legendre_p_seq, legendre_pbar_seq, sph_bessel_j_seq

__all__ = [
    "Method",
    "PswfSet",
    "default_n_keep",
    "legendre_galerkin_matrix",
    "pswf_legendre_galerkin",
    "pswf_eigenvalue_chain",
    "pswf_bessel_ie",
    "pswf_sinc_ie",
    "eval_pswf",
    "pswf_nu",
    "pswf_fourier",
    "bessel_series_extension",
    "SeriesExtension",
    "lgl_diff_matrix",
]

ORTHO_TOL = 1e-10
_TAIL_TOL = 1e-13


class Method(Enum):
    LEGENDRE_GALERKIN = "legendre"
    BESSEL_IE = "bessel"
    SINC_IE = "sinc"


@dataclass(frozen=True)
class PswfSet:
    """
    A computed family ``phi_0 .. phi_{K-1}`` for one bandlimit.

    Attributes
    ----------
    eigenvalues : ndarray
        ``lambda_n``, descending.
    coeffs : tuple of CoeffVector
        Coefficients of each (normalized) ``phi_n`` in the method's basis.
    parity : tuple of Parity
    chi : ndarray or None
        Sturm-Liouville eigenvalues (Legendre-Galerkin only).
    unit_coeffs : ndarray or None
        Unit-norm Legendre coefficients ``alpha^(n)`` as columns (LG only).
    """

    sigma: float
    method: Method
    eigenvalues: np.ndarray
    coeffs: tuple
    parity: tuple
    chi: np.ndarray | None = None
    unit_coeffs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=float)
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    def __len__(self):
        return self.eigenvalues.size

    def __call__(self, n, t):
        return eval_pswf(self, n, t)


def default_n_keep(sigma: float) -> int:
    """``floor(2 sigma / pi) + 10``: the plunge region plus a margin."""
    return int(math.floor(2 * sigma / math.pi)) + 10


def _check_sigma(sigma):
    return BasisKind(BasisTag.BESSEL, sigma).sigma


def _sign_at_one(values_at_one):
    s = np.sign(values_at_one)
    s[s == 0] = 1.0
    return s


# ---------------------------------------------------------------- Legendre-Galerkin

def legendre_galerkin_matrix(sigma: float, n_basis: int, parity: int):
    """
    Diagonal and off-diagonal of the tridiagonal Sturm-Liouville matrix
    restricted to Legendre degrees of one parity.
    """
    k = np.arange(parity, n_basis, 2, dtype=float)
    s2 = sigma * sigma
    diag = k * (k + 1) + s2 * (2 * k * (k + 1) - 1) / ((2 * k - 1) * (2 * k + 3))
    kk = k[:-1]
    off = s2 * (kk + 1) * (kk + 2) / ((2 * kk + 3) * np.sqrt((2 * kk + 1) * (2 * kk + 5)))
    return diag, off


def _effective_degree(alpha):
    big = np.nonzero(np.max(np.abs(alpha), axis=1) > 1e-18)[0]
    return int(big[-1]) if big.size else 0


def lgl_diff_matrix(n_points: int):
    """
    LGL nodes, weights and the collocation differentiation matrix ``D_N``
    (``N = n_points - 1``).
    """
    rule = lgl_rule(n_points)
    x = rule.nodes
    N = n_points - 1
    pn = legendre_p_seq(N, x)[0][N]
    with np.errstate(divide="ignore"):
        d = (pn[:, None] / pn[None, :]) / (x[:, None] - x[None, :])
    np.fill_diagonal(d, 0.0)
    d[0, 0] = -N * (N + 1) / 4.0
    d[N, N] = N * (N + 1) / 4.0
    return rule, d


def pswf_eigenvalue_chain(pset: PswfSet, lgl_points: int | None = None):
    """
    Eigenvalues from the unnormalized Legendre-Galerkin eigenfunctions.

    Even ``nu_{2k} = sqrt(2) alpha_0 / psi_{2k}(0)``; odd ``|nu_n|`` follow from
    the connection formula with the preceding even function, using LGL
    quadrature and the LGL differentiation matrix. Returns
    ``lambda_n = |nu_n|^2 sigma / (2 pi)``.

    Raises
    ------
    NumericalError
        If some ``psi_{2k}(0)`` or a connection inner product vanishes.
    """
    if pset.method is not Method.LEGENDRE_GALERKIN or pset.unit_coeffs is None:
        raise ConfigurationError("the eigenvalue chain needs a Legendre-Galerkin set")
    alpha = pset.unit_coeffs
    kmax = _effective_degree(alpha)
    alpha = alpha[: kmax + 1]
    if lgl_points is None:
        lgl_points = kmax + 16
    rule, d = lgl_diff_matrix(int(lgl_points))
    pbar = legendre_pbar_seq(kmax, rule.nodes)
    psi = alpha.T @ pbar  # (K, n_nodes)
    dpsi = psi @ d.T
    psi0 = alpha.T @ legendre_pbar_seq(kmax, 0.0)
    scale = np.max(np.abs(psi), axis=1)
    nu2 = np.empty(alpha.shape[1])
    for n in range(alpha.shape[1]):
        if n % 2 == 0:
            if abs(psi0[n]) < 1e-12 * scale[n]:
                raise NumericalError(f"psi_{n}(0) vanishes; chain broken at index {n}")
            nu2[n] = (math.sqrt(2.0) * alpha[0, n] / psi0[n]) ** 2
        else:
            num = abs(np.sum(rule.weights * dpsi[n - 1] * psi[n]))
            den = abs(np.sum(rule.weights * dpsi[n] * psi[n - 1]))
            if den == 0.0 or num == 0.0:
                raise NumericalError(f"connection formula degenerate at index {n}")
            nu2[n] = nu2[n - 1] * num / den
    return nu2 * pset.sigma / (2 * math.pi)


def pswf_legendre_galerkin(sigma: float, n_basis: int = 1000, n_keep: int | None = None,
                           lgl_points: int | None = None) -> PswfSet:
    """
    PSWFs on [-1, 1] from the Legendre-Galerkin Sturm-Liouville problem.

    Even and odd degrees are solved separately; functions are ordered by
    ascending ``chi``. Eigenvalues come from :func:`pswf_eigenvalue_chain`,
    and each ``phi_n = sqrt(lambda_n) psi_n / ||psi_n||``.

    Raises
    ------
    ConfigurationError
        If ``n_basis < max(2 sigma, n_keep + 30)``.
    AccuracyError
        If the retained Legendre coefficients have not decayed by the end
        of the basis.
    """
    sigma = _check_sigma(sigma)
    n_keep = default_n_keep(sigma) if n_keep is None else int(n_keep)
    n_basis = int(n_basis)
    if n_keep < 1:
        raise ConfigurationError("n_keep must be positive")
    if n_basis < max(2 * sigma, n_keep + 30):
        raise ConfigurationError(
            f"n_basis={n_basis} is too small; need at least max(2 sigma, n_keep + 30)")
    entries = []
    for p in (0, 1):
        diag, off = legendre_galerkin_matrix(sigma, n_basis, p)
        es = eig_sym_tridiagonal(diag, off)
        take = (n_keep + 1 - p) // 2
        degrees = np.arange(p, n_basis, 2)
        for j in range(1, take + 1):
            a = np.zeros(n_basis)
            a[degrees] = es.vectors[:, -j]
            entries.append((es.eigenvalues[-j], p, a))
    entries.sort(key=lambda e: e[0])
    for n, (_, p, _) in enumerate(entries):
        if p != n % 2:
            raise NumericalError(f"parity ordering broken at index {n}")
    chi = np.array([e[0] for e in entries])
    alpha = np.stack([e[2] for e in entries], axis=1)
    tail = np.max(np.abs(alpha[-10:]))
    if tail > _TAIL_TOL:
        raise AccuracyError(
            f"Legendre coefficients not resolved (tail {tail:.1e}); increase n_basis")
    # psi_n(1) = sum_k alpha_k sqrt(k + 1/2)
    at_one = np.sqrt(np.arange(n_basis) + 0.5) @ alpha
    alpha = alpha * _sign_at_one(at_one)
    pre = PswfSet(sigma, Method.LEGENDRE_GALERKIN, np.ones(n_keep), (), (),
                  chi=chi, unit_coeffs=alpha)
    lam = pswf_eigenvalue_chain(pre, lgl_points)
    kind = BasisKind(BasisTag.LEGENDRE, sigma)
    coeffs = tuple(CoeffVector(kind, math.sqrt(lam[n]) * alpha[:, n], Parity.of_index(n))
                   for n in range(n_keep))
    parity = tuple(Parity.of_index(n) for n in range(n_keep))
    return PswfSet(sigma, Method.LEGENDRE_GALERKIN, lam, coeffs, parity,
                   chi=chi, unit_coeffs=alpha)


# ---------------------------------------------------------------- integral equations

def _merge_blocks(blocks, n_keep):
    """Merge per-parity eigen-systems into one descending list."""
    cand = []
    for parity, es, embed in blocks:
        for j in range(len(es)):
            cand.append((es.eigenvalues[j], parity, embed(es.vectors[:, j])))
    cand.sort(key=lambda c: -c[0])
    return cand[:n_keep]


def _check_orthonormal(beta, gram_apply, lam):
    k = beta.shape[1]
    ortho = np.max(np.abs(beta.T @ beta - np.eye(k)))
    conc = np.max(np.abs(beta.T @ gram_apply(beta) - np.diag(lam)))
    if max(ortho, conc) > ORTHO_TOL:
        raise AccuracyError(
            f"eigenvectors fail orthogonality checks ({ortho:.1e}, {conc:.1e})")


def pswf_bessel_ie(sigma: float, n_basis: int | None = None, n_keep: int | None = None,
                   rule=None, check: bool = True) -> PswfSet:
    """
    PSWFs from the Gram matrix of the normalized spherical Bessel basis.

    The eigenvalues of ``J`` are the ``lambda_n``; each coefficient vector has
    unit l2 norm, so ``phi_n`` has unit norm on R.

    Parameters
    ----------
    n_basis : int, optional
        Defaults to ``max(truncation_order(sigma, 1e-16), n_keep + 10)``.
    rule : QuadRule, optional
        Defaults to ``4 n_basis`` Gauss nodes.
    """
    sigma = _check_sigma(sigma)
    n_keep = default_n_keep(sigma) if n_keep is None else int(n_keep)
    if n_basis is None:
        n_basis = max(truncation_order(sigma, 1e-16), n_keep + 10)
    n_basis = int(n_basis)
    need = truncation_order(sigma, 1e-14)
    if n_basis < need:
        raise ConfigurationError(
            f"n_basis={n_basis} is below the truncation order {need} for sigma={sigma}")
    n_keep = min(n_keep, n_basis)
    gram = gram_bessel(sigma, n_basis, rule, check=check)
    j = gram.entries
    blocks = []
    for p in (0, 1):
        idx = np.arange(p, n_basis, 2)
        if idx.size == 0:
            continue
        es = eig_sym_dense(j[np.ix_(idx, idx)])

        def embed(v, idx=idx):
            out = np.zeros(n_basis)
            out[idx] = v
            return out

        blocks.append((Parity.EVEN if p == 0 else Parity.ODD, es, embed))
    chosen = _merge_blocks(blocks, n_keep)
    lam = np.array([c[0] for c in chosen])
    beta = np.stack([c[2] for c in chosen], axis=1)
    kind = BasisKind(BasisTag.BESSEL, sigma)
    beta = beta * _sign_at_one(beta.T @ basis_matrix(kind, np.arange(n_basis), [1.0])[:, 0])
    if lam[0] > 1.0:
        raise AccuracyError(f"leading eigenvalue {lam[0]!r} exceeds 1")
    _check_orthonormal(beta, lambda b: j @ b, lam)
    coeffs = tuple(CoeffVector(kind, beta[:, n], c[1]) for n, c in enumerate(chosen))
    return PswfSet(sigma, Method.BESSEL_IE, lam, coeffs, tuple(c[1] for c in chosen))


def pswf_sinc_ie(sigma: float, m_max: int | None = None, n_keep: int | None = None,
                 rule=None, margin: int = 40, check: bool = True) -> PswfSet:
    """
    PSWFs from sinc translates ``psi_n``, ``|n| <= m_max``, solved in the
    even/odd combinations and returned as plain sinc coefficients
    ``beta_n = sqrt(pi / sigma) phi(n pi / sigma)``.

    ``m_max`` defaults to ``ceil(sigma / pi) + margin`` and smaller values
    raise ConfigurationError. Accuracy is limited by the algebraic decay of
    the coefficients, so the margin matters.
    """
    sigma = _check_sigma(sigma)
    n_keep = default_n_keep(sigma) if n_keep is None else int(n_keep)
    if m_max is None:
        m_max = math.ceil(sigma / math.pi) + int(margin)
    m_max = int(m_max)
    need = math.ceil(sigma / math.pi) + int(margin)
    if m_max < need:
        raise ConfigurationError(
            f"m_max={m_max} is below ceil(sigma/pi) + margin = {need}; lower margin to override")
    n_keep = min(n_keep, 2 * m_max + 1)
    even, odd = gram_sinc_parity_split(sigma, m_max, rule, check=check)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    size = 2 * m_max + 1
    centre = m_max

    def embed_even(v):
        out = np.zeros(size)
        out[centre] = v[0]
        out[centre + 1:] = v[1:] * inv_sqrt2
        out[:centre] = v[1:][::-1] * inv_sqrt2
        return out

    def embed_odd(v):
        out = np.zeros(size)
        out[centre + 1:] = v * inv_sqrt2
        out[:centre] = -v[::-1] * inv_sqrt2
        return out

    blocks = [(Parity.EVEN, eig_sym_dense(even.entries), embed_even)]
    if m_max > 0:
        blocks.append((Parity.ODD, eig_sym_dense(odd.entries), embed_odd))
    chosen = _merge_blocks(blocks, n_keep)
    lam = np.array([c[0] for c in chosen])
    beta = np.stack([c[2] for c in chosen], axis=1)
    idx = np.arange(-m_max, m_max + 1)
    kind = BasisKind(BasisTag.SINC, sigma)
    beta = beta * _sign_at_one(beta.T @ basis_matrix(kind, idx, [1.0])[:, 0])
    if lam[0] > 1.0:
        raise AccuracyError(f"leading eigenvalue {lam[0]!r} exceeds 1")

    # concentration check in the split coordinates (block-diagonal there)
    def gram_apply(b):
        plus = b[centre:]
        minus = b[:centre + 1][::-1]
        e_coord = np.vstack([plus[:1], (plus[1:] + minus[1:]) * inv_sqrt2])
        o_coord = (plus[1:] - minus[1:]) * inv_sqrt2
        ge = even.entries @ e_coord
        go = odd.entries @ o_coord if m_max > 0 else o_coord
        out = np.zeros_like(b)
        out[centre] = ge[0]
        out[centre + 1:] = (ge[1:] + go) * inv_sqrt2
        out[:centre] = ((ge[1:] - go) * inv_sqrt2)[::-1]
        return out

    _check_orthonormal(beta, gram_apply, lam)
    coeffs = tuple(CoeffVector(kind, beta[:, n], c[1], idx) for n, c in enumerate(chosen))
    return PswfSet(sigma, Method.SINC_IE, lam, coeffs, tuple(c[1] for c in chosen))


# ---------------------------------------------------------------- evaluation

def _check_index(pset, n):
    n = int(n)
    if not 0 <= n < len(pset):
        raise IndexError(f"index {n} outside 0..{len(pset) - 1}")
    return n


def eval_pswf(pset: PswfSet, n: int, t):
    """
    ``phi_n(t)``. Legendre-Galerkin sets only accept ``|t| <= 1``.
    """
    n = _check_index(pset, n)
    t_arr = np.asarray(t, dtype=float)
    if pset.method is Method.LEGENDRE_GALERKIN and np.any(np.abs(t_arr) > 1.0):
        raise DomainError("Legendre-Galerkin PSWFs are only available on [-1, 1]; "
                          "use bessel_series_extension outside")
    c = pset.coeffs[n]
    if pset.method is Method.LEGENDRE_GALERKIN:
        kmax = _effective_degree(c.coeffs[:, None])
        c = CoeffVector(c.basis, c.coeffs[: kmax + 1], c.parity)
    return eval_expansion(c, t_arr)


def pswf_nu(pset: PswfSet) -> np.ndarray:
    """``nu_n = i^n sqrt(2 pi lambda_n / sigma)`` as a complex array."""
    n = np.arange(len(pset))
    return (1j ** n) * np.sqrt(2 * math.pi * pset.eigenvalues / pset.sigma)


def pswf_fourier(pset: PswfSet, n: int, xi):
    """
    Fourier transform ``Phi_n(xi) = int phi_n(t) exp(-i xi t) dt`` with the
    phase ``(-i)^n`` factored out: returns real ``R`` with ``Phi_n = (-i)^n R``.

    Only for Bessel-IE sets. ``R`` vanishes for ``|xi| > sigma``.
    """
    if pset.method is not Method.BESSEL_IE:
        raise ConfigurationError("pswf_fourier needs a Bessel-IE set")
    n = _check_index(pset, n)
    xi_arr = np.asarray(xi, dtype=float)
    flat = xi_arr.ravel()
    sigma = pset.sigma
    beta = pset.coeffs[n].coeffs
    kmax = _effective_degree(beta[:, None])
    k = np.arange(kmax + 1)
    # (-i)^k = (-i)^n (-1)^((k-n)/2) on the surviving parity
    sign = np.where((k - n) % 2 == 0, (-1.0) ** ((k - n) // 2), 0.0)
    inside = np.abs(flat) <= sigma
    out = np.zeros_like(flat)
    if inside.any():
        pbar = legendre_pbar_seq(kmax, flat[inside] / sigma)
        out[inside] = math.sqrt(2 * math.pi / sigma) * ((beta[: kmax + 1] * sign) @ pbar)
    out = out.reshape(xi_arr.shape)
    return out if xi_arr.ndim else float(out)


class SeriesExtension(NamedTuple):
    values: np.ndarray
    ill_conditioned: bool


def bessel_series_extension(pset: PswfSet, n: int, t) -> SeriesExtension:
    """
    ``phi_n(t) = sqrt(2 sigma / (pi lambda_n)) sum_m i^(m-n) alpha_m sqrt(m+1/2) j_m(sigma t)``
    from Legendre-Galerkin coefficients, valid on all of R.

    The ``1/sqrt(lambda_n)`` factor amplifies errors badly once
    ``n > 2 sigma / pi``; ``ill_conditioned`` flags that case.
    """
    if pset.method is not Method.LEGENDRE_GALERKIN:
        raise ConfigurationError("bessel_series_extension needs a Legendre-Galerkin set")
    n = _check_index(pset, n)
    t_arr = np.asarray(t, dtype=float)
    alpha = pset.coeffs[n].coeffs
    kmax = _effective_degree(alpha[:, None])
    m = np.arange(kmax + 1)
    sign = np.where((m - n) % 2 == 0, (-1.0) ** ((m - n) // 2), 0.0)
    jm = sph_bessel_j_seq(kmax, pset.sigma * t_arr.ravel())
    lam = pset.eigenvalues[n]
    vals = math.sqrt(2 * pset.sigma / (math.pi * lam)) * (
        (alpha[: kmax + 1] * sign * np.sqrt(m + 0.5)) @ jm)
    vals = vals.reshape(t_arr.shape) if t_arr.ndim else float(vals[0])
    return SeriesExtension(vals, bool(n > 2 * pset.sigma / math.pi))
